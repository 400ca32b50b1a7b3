# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

projens notifications.

Long sweeps publish their progress as blinker signals; the command line
subscribes to write the per-episode CSV files and the audit summaries.
"""

import logging

import blinker


LOG = logging.getLogger('projens.lib.notify')

NAMESPACE = blinker.Namespace()

EPISODE_FINISHED = NAMESPACE.signal('projens.episode.finished')
AUDIT_FINISHED = NAMESPACE.signal('projens.audit.finished')

TOPICS = {
    'episode.finished': EPISODE_FINISHED,
    'audit.finished': AUDIT_FINISHED,
}


def log(sender, topic, msg):
    ''' Send the notification ``msg`` about ``topic`` on behalf of
    ``sender``; receivers connected for that sender get ``msg`` as keyword
    argument.
    '''
    if topic not in TOPICS:
        raise KeyError('Unknown notification topic: %s' % topic)
    LOG.debug('projens.%s: %s', topic, msg)
    return TOPICS[topic].send(sender, msg=msg)
