# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Log handlers and the filter decorating records with process and run
context.

"""

import logging
import logging.handlers
import os
import socket

psutil = None
try:
    import psutil
except (OSError, ImportError):  # pragma: no cover
    # Records then carry a placeholder instead of the process details.
    pass


# Describes the run the current process is working on, e.g.
# {'command': 'deepsea', 'size': 10, 'seed': 3, 'variant': 'pe-dqn'}
RUN_CONTEXT = {}


def set_run_context(**kwargs):
    ''' Replace the run context attached to every log record. '''
    RUN_CONTEXT.clear()
    RUN_CONTEXT.update(kwargs)


def format_run_context():
    ''' Render the run context as ``key=value`` pairs, sorted by key. '''
    if not RUN_CONTEXT:
        return '-'
    return ' '.join(
        '%s=%s' % (key, RUN_CONTEXT[key]) for key in sorted(RUN_CONTEXT))


class ContextInjector(logging.Filter):
    """ Logging filter that adds context to log records.

    The filter never drops a record. It hangs the host, the process
    details and the current run context on it so that an error report
    received from a long sweep says which job produced it.

    """

    def filter(self, record):
        """ Set up additional information on the record object. """
        record.host = socket.gethostname()
        record.pid = os.getpid()
        record.proc_name = '-'
        record.command_line = '-'
        record.rss = '-'
        process = self.get_current_process()
        if process is not None:
            try:
                record.proc_name = process.name()
                record.command_line = ' '.join(process.cmdline())
                record.rss = process.memory_info().rss
            except psutil.Error:  # pragma: no cover
                pass
        record.run = format_run_context()
        return True

    @staticmethod
    def get_current_process():
        """ Return the psutil handle of the current process, if any. """
        if not psutil:  # pragma: no cover
            return None
        try:
            return psutil.Process(os.getpid())
        except psutil.Error:  # pragma: no cover
            return None


MSG_FORMAT = """Process Details
---------------
host:     %(host)s
PID:      %(pid)s
name:     %(proc_name)s
command:  %(command_line)s
rss:      %(rss)s

Message type:       %(levelname)s
Location:           %(pathname)s:%(lineno)d
Module:             %(module)s
Function:           %(funcName)s
Time:               %(asctime)s

Run:    %(run)s


Message:
--------

%(message)s
"""

LINE_FORMAT = '%(asctime)s %(levelname)s %(name)s [%(run)s] %(message)s'


def get_mail_handler(smtp_server, mail_admin):
    """ Set up the handler sending emails for errors of a run.
    """
    mail_handler = logging.handlers.SMTPHandler(
        smtp_server,
        'projens@%s' % socket.gethostname(),
        mail_admin,
        'projens error')
    mail_handler.setFormatter(logging.Formatter(MSG_FORMAT))
    mail_handler.setLevel(logging.ERROR)
    mail_handler.addFilter(ContextInjector())
    return mail_handler


def get_file_handler(path, level='INFO'):
    """ Set up the handler writing the log of a run next to its outputs.
    """
    file_handler = logging.FileHandler(path)
    file_handler.setFormatter(logging.Formatter(LINE_FORMAT))
    file_handler.setLevel(level)
    file_handler.addFilter(ContextInjector())
    return file_handler
