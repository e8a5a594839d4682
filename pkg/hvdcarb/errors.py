# Hvdcarb Errors
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


class HvdcError(Exception):
    exit_code = 1


class DomainError(HvdcError, ValueError):
    exit_code = 8


class ParseError(HvdcError, ValueError):
    exit_code = 3

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        if line is not None:
            message = 'line {}: {}'.format(line, message)
        if source is not None:
            message = '{}: {}'.format(source, message)
        super().__init__(message)


class DuplicateError(ParseError):
    pass


class ConfigConflictError(ParseError):
    pass


class ValidationError(HvdcError, ValueError):
    exit_code = 4

    def __init__(self, report):
        self.report = report
        super().__init__('\n'.join(report.short()))


class ResolutionError(HvdcError, KeyError):
    exit_code = 5

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class AlignmentError(HvdcError, ValueError):
    exit_code = 6

    def __init__(self, message, missing=()):
        self.missing = tuple(missing)
        if self.missing:
            message = '{} (missing timesteps: {})'.format(
                message, ', '.join(map(str, self.missing))
            )
        super().__init__(message)


class CapacityError(HvdcError, ValueError):
    exit_code = 7

    def __init__(self, link_id, flow_mw, capacity_mw):
        self.link_id = link_id
        self.flow_mw = flow_mw
        self.capacity_mw = capacity_mw
        super().__init__(
            'Link {} would carry {} MW over its {} MW capacity'.format(
                link_id, flow_mw, capacity_mw
            )
        )
