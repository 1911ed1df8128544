#!/usr/bin/env python3
'''
Console helpers, colored when the stream is a terminal.

Level is read from AOS_LOG_LEVEL (debug, info, warn, error) and can be
changed at runtime with set_level().
'''
import os
import sys

# color:
# https://gist.github.com/rene-d/9e584a7dd2935d0f461904b9f2950007
# 1;30:gray 31:red, 32:green, 33:yellow, 34:blue, 35:purple, 36:dark green, 37:white
GRAY = '1;30'
RED = '0;31'
GREEN = '0;32'
YELLOW = '0;33'
WHITE = '0;37'

LEVELS = {'debug': 10, 'info': 20, 'warn': 30, 'error': 40}

_level = LEVELS.get(os.environ.get('AOS_LOG_LEVEL', 'warn').lower(), LEVELS['warn'])


def set_level(name):
    global _level
    try:
        _level = LEVELS[name]
    except KeyError:
        raise ValueError(f"unknown log level {name!r}, expected one of {sorted(LEVELS)}")


def get_level():
    for name, value in LEVELS.items():
        if value == _level:
            return name


def print_color(msg, end='\n', file=None, flush=False, color=''):
    file = file if file is not None else sys.stderr
    if color and hasattr(file, 'isatty') and file.isatty():
        print('\033[%sm%s\033[0m'%(color, msg), end=end, file=file, flush=flush)
    else:
        print(msg, end=end, file=file, flush=flush)


def _emit(level, msg, color, end, file, flush):
    if LEVELS[level] >= _level:
        print_color(msg, end=end, file=file, flush=flush, color=color)


def debug(msg, end='\n', file=None, flush=False):
    _emit('debug', msg, GRAY, end, file, flush)

def info(msg, end='\n', file=None, flush=False):
    _emit('info', msg, WHITE, end, file, flush)

def warn(msg, end='\n', file=None, flush=False):
    _emit('warn', msg, YELLOW, end, file, flush)

def error(msg, end='\n', file=None, flush=False):
    _emit('error', msg, RED, end, file, flush)
