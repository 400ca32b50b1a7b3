# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

"""


class ProjensException(Exception):
    ''' Parent class of all the exceptions raised by projens.
    '''
    pass


class ArgumentError(ProjensException, ValueError):
    ''' Exception raised when an operation is called with arguments
    outside of its domain (empty atom list, negative weight, p < 1...).
    '''
    pass


class UsageError(ProjensException):
    ''' Exception raised when a stateful object is used out of order, for
    example stepping an environment whose episode is over.
    '''
    pass


class NumericalError(ProjensException):
    ''' Exception raised when a loss or a gradient stops being finite.

    :arg message: what went wrong
    :kwarg diagnostic: a dump of the quantities involved

    '''

    def __init__(self, message, diagnostic=None):
        super(NumericalError, self).__init__(message)
        self.diagnostic = diagnostic

    def __str__(self):
        if self.diagnostic:
            return '%s\n%s' % (self.args[0], self.diagnostic)
        return self.args[0]


class ConfigError(ProjensException):
    ''' Exception raised when a run configuration cannot be read or does
    not validate.
    '''

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super(ConfigError, self).__init__('; '.join(self.errors))
