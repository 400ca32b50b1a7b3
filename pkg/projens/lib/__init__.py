# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Numerical core of projens: distributions, projections, finite MDPs,
environments, networks and the agent.

"""
