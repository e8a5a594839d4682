# Hvdcarb Reports
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

from collections import namedtuple
from collections import OrderedDict


Violation = namedtuple('Violation', ['kind', 'entity_id', 'message'])


class ValidationReport(object):
    """
    Invariant violations found in a network, grouped by entity kind.
    An empty report means the network is valid.
    """
    sections = OrderedDict([
        ('[R!]', 'Region Violations:'),
        ('[L!]', 'Interconnector Violations:'),
        ('[P!]', 'Price Series Violations:'),
        ('[C!]', 'Capacity Profile Violations:'),
    ])

    prefixes = {
        'region': '[R!]',
        'link': '[L!]',
        'prices': '[P!]',
        'capacity': '[C!]',
    }

    def __init__(self, violations=()):
        self.violations = list(violations)

    def add(self, kind, entity_id, message):
        if kind not in self.prefixes:
            raise ValueError(kind)
        self.violations.append(Violation(kind, entity_id, message))

    def extend(self, other):
        self.violations.extend(other.violations)

    def of_kind(self, kind):
        return [v for v in self.violations if v.kind == kind]

    def short(self):
        for prefix, _ in self.sections.items():
            for v in self.violations:
                if self.prefixes[v.kind] != prefix:
                    continue
                yield '{} {}'.format(prefix, v.entity_id)
                yield '[ m] :: {}'.format(v.message)

    def long(self):
        current = None

        for line in self.short():
            prefix = line[:4]
            section = self.sections.get(prefix, current)

            if current != section:
                if current:
                    yield ''
                current = section
                yield current

            if prefix in self.sections:
                yield '  ' + line[5:]
            else:
                yield '    ' + line[5:]

        yield ''
        yield '{} violations:'.format(len(self.violations))
        for kind, prefix in self.prefixes.items():
            yield '  {} {}'.format(len(self.of_kind(kind)), kind)

    def __bool__(self):
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def __str__(self):
        return '\n'.join(self.long())

    def __repr__(self):
        return 'ValidationReport(violations={!r})'.format(self.violations)


Comparison = namedtuple(
    'Comparison', ['key', 'computed', 'published', 'provenance', 'note']
)


class CaseReport(object):
    """
    Side-by-side ledger of computed profits and the figures printed in
    the published case study. Rows where the two disagree are flagged,
    not hidden.
    """
    tolerance = 0.005

    sections = OrderedDict([
        ('[P=]', 'Matching Published Figures:'),
        ('[P!]', 'Differing From Published Figures:'),
        ('[P?]', 'No Published Figure:'),
    ])

    def __init__(self, rows=(), title=None):
        self.title = title
        self.rows = list(rows)

    def add(self, key, computed, published=None, provenance='oracle',
            note=''):
        self.rows.append(
            Comparison(key, computed, published, provenance, note))

    @classmethod
    def status(cls, row):
        if row.published is None:
            return '[P?]'
        if abs(row.computed - row.published) <= cls.tolerance:
            return '[P=]'
        return '[P!]'

    @property
    def matches(self):
        return [r for r in self.rows if self.status(r) == '[P=]']

    @property
    def deltas(self):
        return [r for r in self.rows if self.status(r) == '[P!]']

    def short(self):
        for prefix in self.sections:
            for row in self.rows:
                if self.status(row) != prefix:
                    continue
                yield '{} {}'.format(prefix, row.key)
                yield '[ c] :: computed {:.2f} ({})'.format(
                    row.computed, row.provenance
                )
                if row.published is not None:
                    yield '[ p] :: published {:.2f}'.format(row.published)
                    yield '[ d] :: delta {:+.2f}'.format(
                        row.computed - row.published
                    )
                if row.note:
                    yield '[ n] :: {}'.format(row.note)

    def table(self):
        header = '{:<12} {:>16} {:>16} {:>12}  {:<8} {}'.format(
            'item', 'computed', 'published', 'delta', 'status', 'provenance'
        )
        yield header
        yield '-' * len(header)
        labels = {'[P=]': 'match', '[P!]': 'delta', '[P?]': '-'}

        for row in self.rows:
            if row.published is None:
                published, delta = '-', '-'
            else:
                published = '{:,.2f}'.format(row.published)
                delta = '{:+,.2f}'.format(row.computed - row.published)
            yield '{:<12} {:>16} {:>16} {:>12}  {:<8} {}'.format(
                row.key, '{:,.2f}'.format(row.computed), published, delta,
                labels[self.status(row)], row.provenance,
            )

        notes = [row for row in self.rows if row.note]
        if notes:
            yield ''
            yield 'Notes:'
            for row in notes:
                yield '  {}: {}'.format(row.key, row.note)

    def long(self):
        if self.title:
            yield self.title
            yield ''
        yield from self.table()
        yield ''
        yield '{} rows:'.format(len(self.rows))
        yield '  {} match'.format(len(self.matches))
        yield '  {} delta'.format(len(self.deltas))

    def __str__(self):
        return '\n'.join(self.long())

    def __repr__(self):
        return 'CaseReport(title={!r}, rows={!r})'.format(
            self.title, self.rows
        )
