# Hvdcarb Utils
# Copyright (C) 2024 Hvdcarb contributors
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program. If not, see <http://www.gnu.org/licenses/>.

import io
import os
import re
import contextlib

DATA_ENV = 'HVDCARB_DATA'

_subsection = re.compile(r'^(\w+)(?:\s+"([^"]*)")?$')


def data_dir():
    """Bundled data directory, unless HVDCARB_DATA points elsewhere."""
    override = os.getenv(DATA_ENV)
    if override:
        return os.path.abspath(override)
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')


def data_path(*parts):
    return os.path.join(data_dir(), *parts)


def split_section(name):
    """
    Splits a git-config style section header like 'link "moyle"' into
    ('link', 'moyle'). A plain header gives (name, None).
    """
    match = _subsection.match(name.strip())
    if not match:
        raise ValueError(name)
    return match.group(1), match.group(2)


def source_name(source):
    if isinstance(source, (str, os.PathLike)):
        return os.fspath(source)
    return getattr(source, 'name', '<stream>')


@contextlib.contextmanager
def open_text(source, mode='r'):
    """
    Opens a path as UTF-8 text with plain newlines, or passes an already
    open stream through without closing it.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, mode, encoding='utf-8', newline='') as file:
            yield file
    else:
        yield source


def emit(document, dest=None):
    """Writes a document to a path or stream and returns it."""
    if dest is not None:
        with open_text(dest, 'w') as file:
            file.write(document)
    return document


def text_buffer(text=''):
    return io.StringIO(text)
