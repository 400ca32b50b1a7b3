#!/usr/bin/env python

import sys

from projens.cli import main

sys.exit(main())
