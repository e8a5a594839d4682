# Hvdcarb Wheeling
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
Wheeling through a three area chain: 1 -(link12)- 2 -(link23)- 3.

Power injected at one end loses r on each link and c while crossing
area 2. The two gates of each scenario are implemented exactly as
published, including where the transit loss c appears; the gates of the
two scenarios are therefore not exact mirrors of each other.
"""

from collections import namedtuple

from hvdcarb.errors import CapacityError
from hvdcarb.errors import DomainError
from hvdcarb.errors import ResolutionError

S123 = 'S123'
S321 = 'S321'

SCENARIOS = (S123, S321)


def _check_losses(*losses):
    for loss in losses:
        if not 0 <= loss < 1:
            raise DomainError('Loss must be in [0, 1): {}'.format(loss))


def _check_quantity(x):
    if not x >= 0:
        raise DomainError('Quantity must be >= 0: {}'.format(x))


def wheel_gates_123(p1, p2, p3, r1, r2, c):
    _check_losses(r1, r2, c)
    gate_a = p3 * (1 - r2) * (1 - c) - p2
    gate_b = p2 * (1 - r1) - p1
    return gate_a, gate_b


def wheel_profit_123(p1, p3, r1, r2, c, x, duration_h=1.0):
    """Raw profit of wheeling 1 -> 3; negative when not worth doing."""
    _check_losses(r1, r2, c)
    _check_quantity(x)
    return (p3 * (1 - r1) * (1 - r2) * (1 - c) - p1) * x * duration_h


def wheel_gates_321(p1, p2, p3, r1, r2, c):
    _check_losses(r1, r2, c)
    gate_a = p1 * (1 - r1) * (1 - c) - p2
    gate_b = p2 * (1 - r2) - p3
    return gate_a, gate_b


def wheel_profit_321(p1, p3, r1, r2, c, x, duration_h=1.0):
    """Raw profit of wheeling 3 -> 1; negative when not worth doing."""
    _check_losses(r1, r2, c)
    _check_quantity(x)
    return (p1 * (1 - r1) * (1 - r2) * (1 - c) - p3) * x * duration_h


class WheelingChain(namedtuple('WheelingChain', [
        'area1', 'area2', 'area3', 'link12', 'link23',
        'transit_loss_c'])):
    __slots__ = ()

    def __new__(cls, area1, area2, area3, link12, link23,
                transit_loss_c=0.0):
        transit_loss_c = float(transit_loss_c)
        if not 0 <= transit_loss_c < 1:
            raise DomainError(
                'Transit loss must be in [0, 1): {}'.format(transit_loss_c)
            )
        if not link12.connects(area1, area2):
            raise ResolutionError('Link {} does not join {} and {}'.format(
                link12.id, area1, area2))
        if not link23.connects(area2, area3):
            raise ResolutionError('Link {} does not join {} and {}'.format(
                link23.id, area2, area3))
        return super().__new__(cls, area1, area2, area3, link12, link23,
                               transit_loss_c)

    @classmethod
    def resolve(cls, network, area1, area2, area3, link12_id, link23_id,
                transit_loss_c=0.0):
        for area in (area1, area2, area3):
            network.region(area)
        return cls(area1, area2, area3, network.link(link12_id),
                   network.link(link23_id), transit_loss_c)

    @property
    def areas(self):
        return (self.area1, self.area2, self.area3)

    @property
    def r1(self):
        return self.link12.loss_fraction

    @property
    def r2(self):
        return self.link23.loss_fraction

    @property
    def id(self):
        return '{}+{}'.format(self.link12.id, self.link23.id)

    def reversed(self):
        return WheelingChain(self.area3, self.area2, self.area1,
                             self.link23, self.link12, self.transit_loss_c)

    def prices_at(self, network, timestep):
        return {area: network.prices(area).price_at(timestep)
                for area in self.areas}

    def __str__(self):
        return '{} -[{}]- {} -[{}]- {} (c={:g})'.format(
            self.area1, self.link12.id, self.area2, self.link23.id,
            self.area3, self.transit_loss_c,
        )


class WheelingResult(namedtuple('WheelingResult', [
        'scenario', 'feasible', 'gate_values', 'quantity_mw', 'margin',
        'profit'])):
    """
    Outcome of one wheeling direction. margin is the end-to-end value
    per injected MWh; profit is zero whenever the gates are not both
    strictly positive.
    """
    __slots__ = ()

    def __str__(self):
        return '{} {} gates=({:.2f}, {:.2f}) {:g} MW -> {:.2f} EUR'.format(
            self.scenario, 'feasible' if self.feasible else 'infeasible',
            self.gate_values[0], self.gate_values[1], self.quantity_mw,
            self.profit,
        )


def leg_flows(chain, scenario, x):
    """Power entering each leg, in the order it is crossed."""
    if scenario == S123:
        return [(chain.link12, x),
                (chain.link23, x * (1 - chain.r1) * (1 - chain.transit_loss_c))]
    if scenario == S321:
        return [(chain.link23, x),
                (chain.link12, x * (1 - chain.r2) * (1 - chain.transit_loss_c))]
    raise ValueError(scenario)


def check_capacity(chain, scenario, x):
    for link, flow in leg_flows(chain, scenario, x):
        if flow > link.capacity_mw:
            raise CapacityError(link.id, flow, link.capacity_mw)


def evaluate_wheel(chain, prices, x_request, duration_h=1.0):
    """
    Evaluates both wheeling directions of the chain for prices given as
    a mapping from region id to EUR/MWh. Only a feasible direction is
    dispatched, and only its legs are checked against capacity.
    """
    _check_quantity(x_request)
    p1, p2, p3 = (prices[area] for area in chain.areas)
    r1, r2, c = chain.r1, chain.r2, chain.transit_loss_c

    evaluated = [
        (S123, wheel_gates_123(p1, p2, p3, r1, r2, c),
         wheel_profit_123(p1, p3, r1, r2, c, 1.0)),
        (S321, wheel_gates_321(p1, p2, p3, r1, r2, c),
         wheel_profit_321(p1, p3, r1, r2, c, 1.0)),
    ]

    results = []
    for scenario, gates, margin in evaluated:
        feasible = gates[0] > 0 and gates[1] > 0
        if feasible:
            check_capacity(chain, scenario, x_request)
            if scenario == S123:
                profit = wheel_profit_123(p1, p3, r1, r2, c, x_request,
                                          duration_h)
            else:
                profit = wheel_profit_321(p1, p3, r1, r2, c, x_request,
                                          duration_h)
            quantity = float(x_request)
        else:
            quantity, profit = 0.0, 0.0
        results.append(
            WheelingResult(scenario, feasible, gates, quantity, margin,
                           profit)
        )

    return tuple(results)
