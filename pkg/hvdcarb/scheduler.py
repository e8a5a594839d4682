# Hvdcarb Horizon Scheduler
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
Dispatch of links over a horizon with dynamic capacity X_max^t.

The horizon problem maximizes sum_t x_t lambda_t d over 0 <= x_t <= X_max^t,
where lambda_t is pinned to its tight epigraph bound
max(p_i - p_j - r p_i - R_b, p_j - p_i - r p_j - R_b, 0). Read literally as a
minimization it is solved by x = 0, which matches none of the published
profits. The problem has no coupling across t, so it is solved step by step.
"""

import math
import logging
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.optimize import linprog

from hvdcarb.arbitrage import A_TO_B
from hvdcarb.arbitrage import B_TO_A
from hvdcarb.arbitrage import IDLE
from hvdcarb.arbitrage import NO_BIAS
from hvdcarb.arbitrage import FlowDecision
from hvdcarb.arbitrage import optimal_flow
from hvdcarb.errors import AlignmentError
from hvdcarb.errors import DomainError
from hvdcarb.errors import HvdcError
from hvdcarb.errors import ResolutionError
from hvdcarb.market import CapacityProfile

log = logging.getLogger(__name__)

HOURS_PER_YEAR = 8760


class Schedule(namedtuple('Schedule', [
        'interconnector_id', 'decisions', 'total_profit'])):
    __slots__ = ()

    def __new__(cls, interconnector_id, decisions, total_profit=None):
        decisions = tuple(decisions)
        if total_profit is None:
            total_profit = math.fsum(d.profit for d in decisions)
        return super().__new__(cls, interconnector_id, decisions,
                               total_profit)

    @property
    def timesteps(self):
        return tuple(d.timestep for d in self.decisions)

    @property
    def active_timesteps(self):
        return frozenset(d.timestep for d in self.decisions if d.active)

    def __str__(self):
        lines = ['Schedule {}: {:.2f} EUR over {} steps'.format(
            self.interconnector_id, self.total_profit, len(self.decisions))]
        lines.extend('  {}'.format(d) for d in self.decisions)
        return '\n'.join(lines)


class PortfolioResult(namedtuple('PortfolioResult', [
        'schedules', 'grand_total', 'annualized', 'horizon_hours'])):
    __slots__ = ()

    def schedule(self, link_id):
        for schedule in self.schedules:
            if schedule.interconnector_id == link_id:
                return schedule
        raise ResolutionError('No schedule for link: {}'.format(link_id))

    @property
    def totals(self):
        return {s.interconnector_id: s.total_profit for s in self.schedules}


LpRelaxation = namedtuple('LpRelaxation', ['total_profit', 'quantities'])


def extrapolate_annual(hourly_profit):
    if not hourly_profit >= 0:
        raise DomainError(
            'Hourly profit must be >= 0: {}'.format(hourly_profit)
        )
    return hourly_profit * HOURS_PER_YEAR


def _check_duration(duration_h):
    if not duration_h > 0:
        raise DomainError('Step duration must be > 0: {}'.format(duration_h))


def align(prices_a, prices_b, link, capacity=None):
    """
    Checks that both price series and the capacity profile belong to
    the link and cover the same timesteps, and returns per-step rows of
    (t, p_a, p_b, x_max).
    """
    if (prices_a.region_id, prices_b.region_id) != link.endpoints:
        raise ResolutionError(
            'Link {} joins {} and {}, prices given for {} and {}'.format(
                link.id, link.endpoint_a, link.endpoint_b,
                prices_a.region_id, prices_b.region_id,
            )
        )

    if capacity is None:
        capacity = CapacityProfile.constant(link, prices_a.timesteps)
    elif capacity.interconnector_id != link.id:
        raise ResolutionError(
            'Capacity profile of {} given for link {}'.format(
                capacity.interconnector_id, link.id
            )
        )

    steps = [prices_a.as_dict(), prices_b.as_dict(), capacity.as_dict()]
    horizon = sorted(set().union(*steps))
    missing = sorted(t for t in horizon if not all(t in s for s in steps))
    if missing:
        raise AlignmentError(
            'Prices and capacity of link {} cover different '
            'horizons'.format(link.id), missing,
        )

    p_a, p_b, x_max = steps
    return [(t, p_a[t], p_b[t], x_max[t]) for t in horizon]


def schedule_link(prices_a, prices_b, link, capacity=None, bias=NO_BIAS,
                  duration_h=1.0):
    _check_duration(duration_h)
    rows = align(prices_a, prices_b, link, capacity)
    r = link.loss_fraction

    decisions = [
        optimal_flow(p_a, p_b, r, x_max, bias.r_b, duration_h, t)
        for t, p_a, p_b, x_max in rows
    ]
    schedule = Schedule(link.id, decisions)
    log.debug('Scheduled %s over %d steps: %.2f EUR',
              link.id, len(decisions), schedule.total_profit)
    return schedule


def lp_oracle(prices_a, prices_b, link, capacity=None, bias=NO_BIAS,
              duration_h=1.0):
    """
    Solves the horizon problem by enumeration. For every step lambda_t is
    the largest of its epigraph lower bounds and x_t is whichever corner
    of [0, X_max^t] earns more. Meant as a test oracle for small horizons.
    """
    _check_duration(duration_h)
    rows = align(prices_a, prices_b, link, capacity)
    r, r_b = link.loss_fraction, bias.r_b

    decisions = []
    for t, p_a, p_b, x_max in rows:
        if not x_max >= 0:
            raise DomainError('x_max must be >= 0: {}'.format(x_max))

        bounds = [
            (IDLE, 0.0),
            (A_TO_B, p_b - p_a - r * p_b - r_b),
            (B_TO_A, p_a - p_b - r * p_a - r_b),
        ]
        direction, lam = bounds[0]
        for candidate, value in bounds[1:]:
            if value > lam:
                direction, lam = candidate, value

        x, profit = 0.0, 0.0
        for corner in (0.0, x_max):
            value = corner * duration_h * lam
            if value > profit:
                x, profit = corner, value

        if x == 0:
            direction = IDLE
        decisions.append(FlowDecision(t, direction, x, lam, profit))

    return Schedule(link.id, decisions)


def lp_relaxation(prices_a, prices_b, link, capacity=None, bias=NO_BIAS,
                  duration_h=1.0):
    """
    Continuous relaxation of the horizon problem solved with HiGHS.
    Returns the optimal total profit and dispatched quantities; used to
    cross-check the closed-form scheduler within solver tolerance.
    """
    _check_duration(duration_h)
    rows = align(prices_a, prices_b, link, capacity)
    if not rows:
        return LpRelaxation(0.0, np.zeros(0))

    _, p_a, p_b, x_max = (np.array(col, dtype=float) for col in zip(*rows))
    r, r_b = link.loss_fraction, bias.r_b

    lam = np.maximum.reduce([
        np.zeros_like(p_a),
        p_b - p_a - r * p_b - r_b,
        p_a - p_b - r * p_a - r_b,
    ])

    # linprog minimizes
    res = linprog(
        -lam * duration_h,
        bounds=list(zip(np.zeros_like(x_max), x_max)),
        method='highs',
    )
    if not res.success:
        raise RuntimeError('LP relaxation failed: {}'.format(res.message))
    return LpRelaxation(-res.fun, res.x)


def _link_job(network, link, capacities, bias, duration_h, start, end):
    try:
        prices_a = network.prices(link.endpoint_a).select(start, end)
        prices_b = network.prices(link.endpoint_b).select(start, end)
        capacity = capacities.get(link.id)
        if capacity is not None:
            capacity = capacity.select(start, end)
        return schedule_link(prices_a, prices_b, link, capacity, bias,
                             duration_h)
    except HvdcError as err:
        err.args = ('link {}: {}'.format(link.id, err),) + err.args[1:]
        raise


def schedule_portfolio(network, capacities=None, bias=NO_BIAS,
                       duration_h=1.0, start=None, end=None, workers=1):
    """
    Schedules every link of the network on its own, since links share no
    constraints, and sums the results in link-id order.
    """
    _check_duration(duration_h)
    capacities = dict(capacities or {})
    links = sorted(network.interconnectors, key=lambda i: i.id)

    def job(link):
        return _link_job(network, link, capacities, bias, duration_h,
                         start, end)

    if workers > 1 and len(links) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            schedules = list(pool.map(job, links))
    else:
        schedules = [job(link) for link in links]

    grand_total = math.fsum(s.total_profit for s in schedules)
    horizon = set()
    for schedule in schedules:
        horizon.update(schedule.timesteps)
    horizon_hours = len(horizon) * duration_h

    if horizon_hours:
        annualized = extrapolate_annual(grand_total / horizon_hours)
    else:
        annualized = 0.0

    log.info('Portfolio of %d links: %.2f EUR over %g h',
             len(schedules), grand_total, horizon_hours)
    return PortfolioResult(
        tuple(schedules), grand_total, annualized, horizon_hours
    )
