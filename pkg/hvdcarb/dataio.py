# Hvdcarb Data I/O
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
Readers and writers for price CSVs, capacity profiles, network
configuration files and result reports, plus the bundled Irish case
study.

Network files are git-config style INI:

    [network]
    prices = prices.csv
    loss_rate_per_100km = 0.01

    [region "ireland"]
    name = Ireland

    [link "moyle"]
    from = ireland
    to = scotland
    capacity_mw = 500
    loss_fraction = 0.00635
    length_km = 63.5

A link gives loss_fraction, or length_km with a loss rate (on the link
or in [network]), or both as long as they agree.
"""

import io
import os
import json
import logging
import configparser
from collections import namedtuple
from collections import OrderedDict

import numpy as np
import pandas as pd

from hvdcarb.errors import ConfigConflictError
from hvdcarb.errors import DomainError
from hvdcarb.errors import DuplicateError
from hvdcarb.errors import ParseError
from hvdcarb.errors import ResolutionError
from hvdcarb.errors import ValidationError
from hvdcarb.market import CapacityProfile
from hvdcarb.market import Interconnector
from hvdcarb.market import Network
from hvdcarb.market import PriceSeries
from hvdcarb.market import Region
from hvdcarb.market import loss_from_length
from hvdcarb.market import validate_capacity
from hvdcarb.market import validate_network
from hvdcarb.scheduler import PortfolioResult
from hvdcarb.scheduler import Schedule
from hvdcarb.utils import data_path
from hvdcarb.utils import emit
from hvdcarb.utils import open_text
from hvdcarb.utils import source_name
from hvdcarb.utils import split_section
from hvdcarb.wheeling import WheelingResult

log = logging.getLogger(__name__)

PRICE_COLUMNS = ['timestep', 'region_id', 'price_eur_mwh']
CAPACITY_COLUMNS = ['timestep', 'link_id', 'x_max_mw']
REPORT_COLUMNS = [
    'timestep', 'link_id', 'direction', 'quantity_mw', 'lambda_eur_mwh',
    'profit_eur',
]
PLOT_COLUMNS = [
    'timestep', 'link_id', 'lambda_eur_mwh', 'quantity_mw',
    'cumulative_profit_eur',
]

FORMATS = ('csv', 'structured')

# largest disagreement accepted between loss_fraction and length_km
LOSS_TOLERANCE = 1e-9
# timesteps are stored as int64
TIMESTEP_LIMIT = 2.0 ** 63

_link_keys = {
    'from', 'to', 'capacity_mw', 'loss_fraction', 'length_km',
    'loss_rate_per_100km',
}


def _not_text(err, name):
    return ParseError('not UTF-8 text ({})'.format(err.reason),
                      source=name)


def _read_frame(source, columns):
    """
    Reads a CSV as strings with an exact header. Data row n of the frame
    is line n + 2 of the file.
    """
    name = source_name(source)
    with open_text(source) as file:
        try:
            frame = pd.read_csv(
                file, dtype=str, keep_default_na=False,
                skip_blank_lines=False,
            )
        except pd.errors.EmptyDataError:
            raise ParseError('missing header', line=1, source=name)
        except pd.errors.ParserError as err:
            raise ParseError(str(err).strip(), source=name) from None
        except UnicodeDecodeError as err:
            raise _not_text(err, name) from None

    if list(frame.columns) != columns:
        raise ParseError(
            'expected header {}, got {}'.format(
                ','.join(columns), ','.join(map(str, frame.columns))),
            line=1, source=name,
        )
    return frame, name


def _check_rows(frame, key, value, name, nonnegative=False):
    """
    Parses the timestep and value columns, rejecting the first bad,
    duplicate or out of order row with its line number.
    """
    timesteps = pd.to_numeric(frame['timestep'], errors='coerce')
    values = pd.to_numeric(frame[value], errors='coerce').astype(float)
    ids = frame[key].fillna('').str.strip()

    bad = (
        timesteps.isna() | (timesteps < 0) | (timesteps % 1 != 0)
        | (timesteps.astype(float) >= TIMESTEP_LIMIT)
        | ~np.isfinite(values) | (ids == '')
    )
    if nonnegative:
        bad |= values < 0
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise ParseError(
            'malformed row: {}'.format(','.join(
                str(v) for v in frame.iloc[row].tolist())),
            line=row + 2, source=name,
        )

    frame = pd.DataFrame({
        'timestep': timesteps.astype(int),
        key: ids,
        value: values,
    }, columns=[key, 'timestep', value])

    dup = frame.duplicated(['timestep', key])
    if dup.any():
        row = int(np.flatnonzero(dup.to_numpy())[0])
        raise DuplicateError(
            'duplicate ({}, {})'.format(frame['timestep'].iloc[row],
                                        frame[key].iloc[row]),
            line=row + 2, source=name,
        )

    for entity, group in frame.groupby(key, sort=False):
        steps = group['timestep'].to_numpy()
        order = np.flatnonzero(np.diff(steps) <= 0)
        if len(order):
            row = int(group.index[order[0] + 1])
            raise ParseError(
                'timesteps of {} not increasing'.format(entity),
                line=row + 2, source=name,
            )
    return frame


def _grouped(frame, key, value):
    groups = OrderedDict()
    for entity, group in frame.groupby(key, sort=False):
        groups[entity] = list(zip(group['timestep'].tolist(),
                                  group[value].tolist()))
    return groups


def load_prices(source):
    """Price CSV to an ordered mapping of region id to PriceSeries."""
    frame, name = _read_frame(source, PRICE_COLUMNS)
    frame = _check_rows(frame, 'region_id', 'price_eur_mwh', name)
    series = OrderedDict(
        (region_id, PriceSeries(region_id, steps)) for region_id, steps
        in _grouped(frame, 'region_id', 'price_eur_mwh').items()
    )
    log.debug('Loaded %d price series from %s', len(series), name)
    return series


def load_capacities(source):
    """Capacity CSV to an ordered mapping of link id to CapacityProfile."""
    frame, name = _read_frame(source, CAPACITY_COLUMNS)
    frame = _check_rows(frame, 'link_id', 'x_max_mw', name,
                        nonnegative=True)
    profiles = OrderedDict(
        (link_id, CapacityProfile(link_id, steps)) for link_id, steps
        in _grouped(frame, 'link_id', 'x_max_mw').items()
    )
    for profile in profiles.values():
        report = validate_capacity(profile)
        if report:
            raise ValidationError(report)
    log.debug('Loaded %d capacity profiles from %s', len(profiles), name)
    return profiles


def _series_values(series_set):
    if hasattr(series_set, 'values') and callable(series_set.values):
        return list(series_set.values())
    return list(series_set)


def _write_frame(frame, dest):
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator='\n')
    return emit(buffer.getvalue(), dest)


def write_prices(series_set, dest=None):
    rows = [
        (t, series.region_id, price)
        for series in _series_values(series_set)
        for t, price in series.steps
    ]
    rows.sort(key=lambda row: (row[0], row[1]))
    frame = pd.DataFrame(rows, columns=PRICE_COLUMNS)
    frame = frame.astype({'timestep': int, 'price_eur_mwh': float})
    return _write_frame(frame, dest)


def write_capacities(profiles, dest=None):
    rows = [
        (t, profile.interconnector_id, x_max)
        for profile in _series_values(profiles)
        for t, x_max in profile.steps
    ]
    rows.sort(key=lambda row: (row[0], row[1]))
    frame = pd.DataFrame(rows, columns=CAPACITY_COLUMNS)
    frame = frame.astype({'timestep': int, 'x_max_mw': float})
    return _write_frame(frame, dest)


def _float(section, key, value, name):
    try:
        return float(value)
    except ValueError:
        raise ParseError(
            '[{}] {} is not a number: {!r}'.format(section, key, value),
            source=name,
        ) from None


def _parse_link(link_id, section, default_rate, name):
    keys = set(section.keys())
    unknown = keys - _link_keys
    if unknown:
        raise ParseError('[link "{}"] unknown keys: {}'.format(
            link_id, ', '.join(sorted(unknown))), source=name)
    for key in ('from', 'to', 'capacity_mw'):
        if key not in keys:
            raise ParseError('[link "{}"] missing {}'.format(link_id, key),
                             source=name)

    def number(key):
        if key not in keys:
            return None
        return _float('link "{}"'.format(link_id), key, section[key], name)

    capacity = number('capacity_mw')
    loss = number('loss_fraction')
    length = number('length_km')
    rate = number('loss_rate_per_100km')

    derived = None
    effective_rate = rate if rate is not None else default_rate
    if length is not None and effective_rate is not None:
        try:
            derived = loss_from_length(length, effective_rate)
        except DomainError:
            # left for validate_network to report
            derived = length * effective_rate / 100

    if loss is None and derived is None:
        raise ParseError(
            '[link "{}"] needs loss_fraction, or length_km with a '
            'loss rate'.format(link_id), source=name,
        )
    if loss is not None and derived is not None \
            and abs(loss - derived) > LOSS_TOLERANCE:
        raise ConfigConflictError(
            '[link "{}"] loss_fraction {} disagrees with length_km {} '
            'at {} per 100 km ({})'.format(
                link_id, loss, length, effective_rate, derived),
            source=name,
        )

    return Interconnector(
        link_id, section['from'].strip(), section['to'].strip(), capacity,
        loss if loss is not None else derived, length, rate,
    )


def load_network(source, prices=None, base_dir=None):
    """
    Reads and validates a network file. Prices come from the file's
    prices reference, resolved next to the file, unless given directly.
    """
    name = source_name(source)
    parser = configparser.ConfigParser(interpolation=None)
    with open_text(source) as file:
        try:
            parser.read_file(file, source=name)
        except configparser.Error as err:
            raise ParseError(
                str(err).splitlines()[0], line=getattr(err, 'lineno', None),
                source=name,
            ) from None
        except UnicodeDecodeError as err:
            raise _not_text(err, name) from None

    if base_dir is None:
        if isinstance(source, (str, os.PathLike)):
            base_dir = os.path.dirname(os.path.abspath(source))
        else:
            base_dir = os.getcwd()

    regions, links = [], []
    prices_ref, default_rate = None, None

    for header in parser.sections():
        try:
            kind, entity = split_section(header)
        except ValueError:
            raise ParseError('bad section [{}]'.format(header),
                             source=name) from None
        section = parser[header]

        if kind == 'network' and entity is None:
            unknown = set(section.keys()) - {'prices', 'loss_rate_per_100km'}
            if unknown:
                raise ParseError('[network] unknown keys: {}'.format(
                    ', '.join(sorted(unknown))), source=name)
            prices_ref = section.get('prices')
            if 'loss_rate_per_100km' in section:
                default_rate = _float('network', 'loss_rate_per_100km',
                                      section['loss_rate_per_100km'], name)

        elif kind == 'region' and entity is not None:
            unknown = set(section.keys()) - {'name'}
            if unknown:
                raise ParseError('[region "{}"] unknown keys: {}'.format(
                    entity, ', '.join(sorted(unknown))), source=name)
            regions.append(Region(entity, section.get('name', entity)))

        elif kind == 'link' and entity is not None:
            links.append((entity, section))

        else:
            raise ParseError('unknown section [{}]'.format(header),
                             source=name)

    interconnectors = [
        _parse_link(link_id, section, default_rate, name)
        for link_id, section in links
    ]

    if prices is None and prices_ref:
        try:
            prices = load_prices(os.path.join(base_dir, prices_ref))
        except OSError as err:
            raise ParseError('cannot read prices {}: {}'.format(
                prices_ref, err.strerror), source=name) from None
    network = Network(regions, interconnectors, prices or ())

    report = validate_network(network)
    if report:
        raise ValidationError(report)

    log.debug('Loaded network %r from %s', network, name)
    return network


def write_network(network, dest=None, prices_ref=None):
    parser = configparser.ConfigParser(interpolation=None)

    if prices_ref is not None:
        parser['network'] = {'prices': prices_ref}

    for region in network.regions:
        parser['region "{}"'.format(region.id)] = {'name': region.name}

    for link in network.interconnectors:
        section = OrderedDict([
            ('from', link.endpoint_a),
            ('to', link.endpoint_b),
            ('capacity_mw', repr(link.capacity_mw)),
            ('loss_fraction', repr(link.loss_fraction)),
        ])
        if link.length_km is not None:
            section['length_km'] = repr(link.length_km)
        if link.loss_rate_per_100km is not None:
            section['loss_rate_per_100km'] = repr(link.loss_rate_per_100km)
        parser['link "{}"'.format(link.id)] = section

    buffer = io.StringIO()
    parser.write(buffer)
    return emit(buffer.getvalue(), dest)


ExpectedValue = namedtuple(
    'ExpectedValue', ['key', 'value', 'provenance', 'note']
)


class ExpectedLedger(object):
    """
    Reference profits of the case study. Each value is tagged 'published'
    when printed in the published study, 'published_floor' when the study
    only gives a lower bound, or 'oracle' when derived by direct
    evaluation and checked against the brute-force oracle.
    """
    provenances = ('published', 'published_floor', 'oracle')

    def __init__(self, entries=()):
        self.entries = list(entries)

    @classmethod
    def load(cls, source):
        name = source_name(source)
        parser = configparser.ConfigParser(interpolation=None)
        with open_text(source) as file:
            try:
                parser.read_file(file, source=name)
            except configparser.Error as err:
                raise ParseError(str(err).splitlines()[0],
                                 source=name) from None
            except UnicodeDecodeError as err:
                raise _not_text(err, name) from None

        entries = []
        for header in parser.sections():
            kind, key = split_section(header)
            if kind != 'expected' or key is None:
                raise ParseError('unknown section [{}]'.format(header),
                                 source=name)
            section = parser[header]
            note = section.get('note', '')
            for provenance in cls.provenances:
                if provenance in section:
                    value = _float(header, provenance, section[provenance],
                                   name)
                    entries.append(
                        ExpectedValue(key, value, provenance, note)
                    )
        return cls(entries)

    def keys(self):
        seen = []
        for entry in self.entries:
            if entry.key not in seen:
                seen.append(entry.key)
        return seen

    def get(self, key, provenance, default=None):
        for entry in self.entries:
            if entry.key == key and entry.provenance == provenance:
                return entry.value
        return default

    def value(self, key, provenance):
        value = self.get(key, provenance)
        if value is None:
            raise ResolutionError(
                'No {} value for {}'.format(provenance, key)
            )
        return value

    def note(self, key):
        for entry in self.entries:
            if entry.key == key and entry.note:
                return entry.note
        return ''

    def as_records(self):
        return [entry._asdict() for entry in self.entries]

    def __repr__(self):
        return 'ExpectedLedger(entries={!r})'.format(self.entries)


CaseStudyBundle = namedtuple(
    'CaseStudyBundle', ['network', 'prices', 'expected']
)


def load_case_study(name='ireland'):
    network = load_network(data_path(name, 'network.ini'))
    expected = ExpectedLedger.load(data_path(name, 'expected.ini'))
    prices = OrderedDict((s.region_id, s) for s in network.price_series)
    return CaseStudyBundle(network, prices, expected)


def _decision_rows(schedule):
    for d in schedule.decisions:
        yield (d.timestep, schedule.interconnector_id, d.direction,
               d.quantity_mw, d.marginal_value, d.profit)


def _decision_record(d):
    return OrderedDict([
        ('timestep', d.timestep),
        ('direction', d.direction),
        ('quantity_mw', d.quantity_mw),
        ('lambda_eur_mwh', d.marginal_value),
        ('profit_eur', d.profit),
    ])


def _schedule_record(schedule):
    return OrderedDict([
        ('link_id', schedule.interconnector_id),
        ('total_profit_eur', schedule.total_profit),
        ('decisions', [_decision_record(d) for d in schedule.decisions]),
    ])


def _wheeling_record(result):
    return OrderedDict([
        ('scenario', result.scenario),
        ('feasible', result.feasible),
        ('gate_values', list(result.gate_values)),
        ('quantity_mw', result.quantity_mw),
        ('margin_eur_mwh', result.margin),
        ('profit_eur', result.profit),
    ])


def _as_wheeling(result):
    if isinstance(result, WheelingResult):
        return [result]
    try:
        items = list(result)
    except TypeError:
        return None
    if items and all(isinstance(r, WheelingResult) for r in items):
        return items
    return None


def write_report(result, fmt='csv', dest=None, expected=None,
                 link_id='', timestep=''):
    """
    Writes a Schedule, PortfolioResult or set of WheelingResults as CSV
    or as a structured JSON document. Output is byte-stable for equal
    inputs. link_id and timestep label wheeling rows.
    """
    if fmt not in FORMATS:
        raise ValueError('Unknown report format: {}'.format(fmt))

    wheeling = _as_wheeling(result)
    if isinstance(result, Schedule):
        schedules, kind = [result], 'schedule'
    elif isinstance(result, PortfolioResult):
        schedules, kind = list(result.schedules), 'portfolio'
    elif wheeling is not None:
        schedules, kind = [], 'wheeling'
    else:
        raise TypeError('Cannot report on {!r}'.format(result))

    if fmt == 'csv':
        if kind == 'wheeling':
            rows = [(timestep, link_id, r.scenario, r.quantity_mw,
                     r.margin, r.profit) for r in wheeling]
        else:
            rows = [row for s in schedules for row in _decision_rows(s)]
        frame = pd.DataFrame(rows, columns=REPORT_COLUMNS)
        return _write_frame(frame, dest)

    document = OrderedDict([('kind', kind)])
    if kind == 'wheeling':
        document['link_id'] = link_id
        document['timestep'] = timestep
        document['results'] = [_wheeling_record(r) for r in wheeling]
    else:
        document['schedules'] = [_schedule_record(s) for s in schedules]
    if kind == 'portfolio':
        document['grand_total_eur'] = result.grand_total
        document['annualized_eur'] = result.annualized
        document['horizon_hours'] = result.horizon_hours
    if expected is not None:
        document['expected'] = expected.as_records()

    text = json.dumps(document, indent=2, sort_keys=True) + '\n'
    return emit(text, dest)


def plot_frame(result):
    """Long-format per-link series of lambda, quantity and running profit."""
    if isinstance(result, Schedule):
        schedules = [result]
    else:
        schedules = list(result.schedules)

    frames = []
    for schedule in schedules:
        decisions = schedule.decisions
        profits = np.array([d.profit for d in decisions], dtype=float)
        frames.append(pd.DataFrame({
            'timestep': [d.timestep for d in decisions],
            'link_id': [schedule.interconnector_id] * len(decisions),
            'lambda_eur_mwh': [d.marginal_value for d in decisions],
            'quantity_mw': [d.quantity_mw for d in decisions],
            'cumulative_profit_eur': np.cumsum(profits),
        }, columns=PLOT_COLUMNS))

    if not frames:
        return pd.DataFrame(columns=PLOT_COLUMNS)
    return pd.concat(frames, ignore_index=True)


def write_plot_data(result, dest=None):
    return _write_frame(plot_frame(result), dest)
