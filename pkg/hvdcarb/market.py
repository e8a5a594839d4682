# Hvdcarb Market Model
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

"""
Market areas, their price series, and the HVDC links between them.

All types are immutable tuples. Construction never raises on values that
break a model invariant; validate_network() reports those as data.
"""

import math
from collections import namedtuple
from collections import Counter

import numpy as np

from hvdcarb.errors import DomainError
from hvdcarb.errors import ResolutionError
from hvdcarb.report import ValidationReport

# 1 % of the injected power per 100 km of cable
DEFAULT_LOSS_RATE = 0.01


def loss_from_length(length_km, loss_rate_per_100km=DEFAULT_LOSS_RATE):
    """
    Loss fraction of a link from its length, linear in length.
    The rate is the fraction lost per 100 km.
    """
    if not length_km >= 0:
        raise DomainError('Negative link length: {}'.format(length_km))
    if not 0 <= loss_rate_per_100km < 1:
        raise DomainError(
            'Loss rate must be in [0, 1): {}'.format(loss_rate_per_100km)
        )

    loss = length_km * loss_rate_per_100km / 100
    if not loss < 1:
        raise DomainError(
            'Invalid loss {} for {} km: link would consume all '
            'power'.format(loss, length_km)
        )
    return loss


class Region(namedtuple('Region', ['id', 'name'])):
    __slots__ = ()

    def __new__(cls, id, name=None):
        return super().__new__(cls, id, id if name is None else name)

    def __str__(self):
        return '{} ({})'.format(self.name, self.id)


class _Steps(object):
    __slots__ = ()

    @property
    def timesteps(self):
        return tuple(t for t, _ in self.steps)

    @property
    def values(self):
        return tuple(v for _, v in self.steps)

    def as_dict(self):
        return dict(self.steps)

    def select(self, start=None, end=None):
        steps = tuple(
            (t, v) for t, v in self.steps
            if (start is None or t >= start) and (end is None or t <= end)
        )
        return self._replace(steps=steps)

    def _value_at(self, timestep, what):
        for t, v in self.steps:
            if t == timestep:
                return v
        raise ResolutionError(
            'No {} for {} at timestep {}'.format(what, self[0], timestep)
        )


class PriceSeries(_Steps, namedtuple('PriceSeries', ['region_id', 'steps'])):
    """Prices in EUR/MWh of one region, as (timestep, price) pairs."""
    __slots__ = ()

    def __new__(cls, region_id, steps):
        steps = tuple((int(t), float(p)) for t, p in steps)
        return super().__new__(cls, region_id, steps)

    @property
    def prices(self):
        return self.values

    def price_at(self, timestep):
        return self._value_at(timestep, 'price')


class Interconnector(namedtuple('Interconnector', [
        'id', 'endpoint_a', 'endpoint_b', 'capacity_mw', 'loss_fraction',
        'length_km', 'loss_rate_per_100km'])):
    __slots__ = ()

    def __new__(cls, id, endpoint_a, endpoint_b, capacity_mw,
                loss_fraction, length_km=None, loss_rate_per_100km=None):
        return super().__new__(
            cls, id, endpoint_a, endpoint_b, float(capacity_mw),
            float(loss_fraction),
            None if length_km is None else float(length_km),
            None if loss_rate_per_100km is None
            else float(loss_rate_per_100km),
        )

    @classmethod
    def from_length(cls, id, endpoint_a, endpoint_b, capacity_mw,
                    length_km, loss_rate_per_100km=DEFAULT_LOSS_RATE):
        loss = loss_from_length(length_km, loss_rate_per_100km)
        return cls(id, endpoint_a, endpoint_b, capacity_mw, loss,
                   length_km, loss_rate_per_100km)

    @property
    def endpoints(self):
        return (self.endpoint_a, self.endpoint_b)

    def connects(self, region_a, region_b):
        return {region_a, region_b} == {self.endpoint_a, self.endpoint_b}

    def other(self, region_id):
        if region_id == self.endpoint_a:
            return self.endpoint_b
        if region_id == self.endpoint_b:
            return self.endpoint_a
        raise ResolutionError(
            'Link {} does not touch region {}'.format(self.id, region_id)
        )

    def __str__(self):
        return '{} ({} <-> {}, {:g} MW, r={:g})'.format(
            self.id, self.endpoint_a, self.endpoint_b,
            self.capacity_mw, self.loss_fraction,
        )


class CapacityProfile(_Steps, namedtuple('CapacityProfile', [
        'interconnector_id', 'steps'])):
    """Dynamic transfer limit X_max^t of one link, in MW."""
    __slots__ = ()

    def __new__(cls, interconnector_id, steps):
        steps = tuple((int(t), float(x)) for t, x in steps)
        return super().__new__(cls, interconnector_id, steps)

    @classmethod
    def constant(cls, link, timesteps):
        return cls(link.id, ((t, link.capacity_mw) for t in timesteps))

    @property
    def x_max(self):
        return self.values

    def x_max_at(self, timestep):
        return self._value_at(timestep, 'capacity')

    def scaled(self, factor):
        return self._replace(
            steps=tuple((t, x * factor) for t, x in self.steps)
        )


class Network(namedtuple('Network', [
        'regions', 'interconnectors', 'price_series'])):
    __slots__ = ()

    def __new__(cls, regions=(), interconnectors=(), price_series=()):
        if hasattr(price_series, 'values'):
            price_series = price_series.values()
        return super().__new__(
            cls, tuple(regions), tuple(interconnectors), tuple(price_series)
        )

    def region(self, region_id):
        for region in self.regions:
            if region.id == region_id:
                return region
        raise ResolutionError('Unknown region: {}'.format(region_id))

    def link(self, link_id):
        for link in self.interconnectors:
            if link.id == link_id:
                return link
        raise ResolutionError('Unknown link: {}'.format(link_id))

    def prices(self, region_id):
        for series in self.price_series:
            if series.region_id == region_id:
                return series
        raise ResolutionError('No prices for region: {}'.format(region_id))

    def with_prices(self, price_series):
        if hasattr(price_series, 'values'):
            price_series = price_series.values()
        return self._replace(price_series=tuple(price_series))

    def linked_regions(self):
        seen = []
        for link in self.interconnectors:
            for region_id in link.endpoints:
                if region_id not in seen:
                    seen.append(region_id)
        return seen

    def horizon(self):
        """Sorted union of the timesteps priced in any linked region."""
        linked = set(self.linked_regions())
        timesteps = set()
        for series in self.price_series:
            if series.region_id in linked:
                timesteps.update(series.timesteps)
        return tuple(sorted(timesteps))

    def __repr__(self):
        return 'Network(regions={}, interconnectors={}, series={})'.format(
            [r.id for r in self.regions],
            [i.id for i in self.interconnectors],
            [s.region_id for s in self.price_series],
        )


def _check_steps(report, kind, entity_id, steps, what):
    timesteps = np.array([t for t, _ in steps], dtype=float)
    values = np.array([v for _, v in steps], dtype=float)

    if len(timesteps) and (timesteps < 0).any():
        report.add(kind, entity_id, 'negative timestep')
    if len(timesteps) > 1 and not (np.diff(timesteps) > 0).all():
        report.add(kind, entity_id, 'timesteps not strictly increasing')
    if not np.isfinite(values).all():
        report.add(kind, entity_id, 'non-finite {}'.format(what))
    return values


def validate_capacity(profile, report=None):
    if report is None:
        report = ValidationReport()
    values = _check_steps(
        report, 'capacity', profile.interconnector_id, profile.steps, 'x_max'
    )
    if (values < 0).any():
        report.add('capacity', profile.interconnector_id, 'negative x_max')
    return report


def _is_label(text):
    """Whether text survives a network file unchanged."""
    return text == text.strip() and not any(c in text for c in '\r\n')


def validate_network(network):
    report = ValidationReport()

    region_ids = Counter(r.id for r in network.regions)
    for region in network.regions:
        if not region.id:
            report.add('region', repr(region.id), 'empty region id')
        elif not _is_label(region.id) or '"' in region.id:
            report.add('region', repr(region.id),
                       'id has surrounding blanks, quotes or line breaks')
        if not _is_label(region.name):
            report.add('region', region.id,
                       'name {!r} has surrounding blanks or line breaks'
                       .format(region.name))
    for region_id, count in region_ids.items():
        if count > 1:
            report.add('region', region_id,
                       'declared {} times'.format(count))

    link_ids = Counter(i.id for i in network.interconnectors)
    for link_id, count in link_ids.items():
        if not link_id:
            report.add('link', repr(link_id), 'empty interconnector id')
        elif not _is_label(link_id) or '"' in link_id:
            report.add('link', repr(link_id),
                       'id has surrounding blanks, quotes or line breaks')
        elif count > 1:
            report.add('link', link_id, 'declared {} times'.format(count))

    for link in network.interconnectors:
        for endpoint in link.endpoints:
            if endpoint not in region_ids:
                report.add('link', link.id,
                           'unknown region: {}'.format(endpoint))
        if link.endpoint_a == link.endpoint_b:
            report.add('link', link.id,
                       'both endpoints are {}'.format(link.endpoint_a))
        if not link.capacity_mw >= 0 or math.isinf(link.capacity_mw):
            report.add('link', link.id,
                       'capacity_mw {} not a finite value >= 0'.format(
                           link.capacity_mw))
        if not 0 <= link.loss_fraction < 1:
            report.add('link', link.id,
                       'loss_fraction {} not in [0, 1)'.format(
                           link.loss_fraction))

    series_ids = Counter(s.region_id for s in network.price_series)
    for series in network.price_series:
        if series.region_id not in region_ids:
            report.add('prices', series.region_id, 'unknown region')
        _check_steps(report, 'prices', series.region_id,
                     series.steps, 'price')
    for region_id, count in series_ids.items():
        if count > 1:
            report.add('prices', region_id,
                       '{} price series for one region'.format(count))

    horizon = set(network.horizon())
    for region_id in network.linked_regions():
        if region_id not in series_ids:
            if region_id in region_ids:
                report.add('prices', region_id,
                           'linked region has no price series')
            continue
        missing = horizon.difference(network.prices(region_id).timesteps)
        if missing:
            report.add('prices', region_id, 'missing timesteps: {}'.format(
                ', '.join(map(str, sorted(missing)))))

    return report
