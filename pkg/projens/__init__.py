# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Projection ensembles for distributional reinforcement learning.

"""

__version__ = '0.1.0'


import logging
import os

import flask

import projens.log_utils


# Defaults first, then the file pointed to by PROJENS_CONFIG
CONFIG = flask.Config(os.path.dirname(os.path.abspath(__file__)))
CONFIG.from_object('projens.default_config')

if 'PROJENS_CONFIG' in os.environ:
    CONFIG.from_envvar('PROJENS_CONFIG')


LOG = logging.getLogger('projens')
LOG.setLevel(CONFIG.get('LOG_LEVEL', 'INFO'))

if CONFIG.get('MAIL_ADMIN'):  # pragma: no cover
    LOG.addHandler(projens.log_utils.get_mail_handler(
        smtp_server=CONFIG.get('SMTP_SERVER', '127.0.0.1'),
        mail_admin=CONFIG['MAIL_ADMIN'],
    ))

# Send classic logs to the console
handler = logging.StreamHandler()
handler.setLevel(CONFIG.get('LOG_LEVEL', 'INFO'))
LOG.addHandler(handler)
