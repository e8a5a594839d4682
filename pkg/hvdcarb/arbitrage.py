# Hvdcarb Pairwise Arbitrage
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
Single link, single timestep economics of a lossy HVDC interconnector.

Prices p_i and p_j belong to the link's endpoint_a and endpoint_b. A flow
toward region i delivers (1 - r) x there for x bought in region j, so
its margin per MWh is p_i - p_j - r p_i, with the loss charged at the
destination price. All conditions are strict: a zero margin is no trade.
"""

from collections import namedtuple

from hvdcarb.errors import DomainError

A_TO_B = 'A_to_B'
B_TO_A = 'B_to_A'
IDLE = 'Idle'

DIRECTIONS = (A_TO_B, B_TO_A, IDLE)


class BiasPolicy(namedtuple('BiasPolicy', ['r_b'])):
    """Minimum margin in EUR/MWh a trade must clear before dispatch."""
    __slots__ = ()

    def __new__(cls, r_b=0.0):
        r_b = float(r_b)
        if not r_b >= 0:
            raise DomainError('Bias must be >= 0: {}'.format(r_b))
        return super().__new__(cls, r_b)


NO_BIAS = BiasPolicy(0.0)


class FlowDecision(namedtuple('FlowDecision', [
        'timestep', 'direction', 'quantity_mw', 'marginal_value',
        'profit'])):
    __slots__ = ()

    @property
    def active(self):
        return self.direction != IDLE

    def __str__(self):
        return (
            't={} {} {:g} MW @ {:.4f} EUR/MWh -> {:.2f} EUR'.format(
                self.timestep, self.direction, self.quantity_mw,
                self.marginal_value, self.profit,
            )
        )


def _check_loss(r):
    if not 0 <= r < 1:
        raise DomainError('Loss fraction must be in [0, 1): {}'.format(r))


def _check_quantity(x):
    if not x >= 0:
        raise DomainError('Quantity must be >= 0: {}'.format(x))


def flow_condition(p_to, p_from, r):
    """
    Operating condition for a single flow: true iff buying at p_from and
    delivering (1 - r) of it at p_to is strictly profitable. Only defined
    for positive prices; use marginal_value() for general prices.
    """
    if not (p_to > 0 and p_from > 0):
        raise DomainError(
            'Ratio condition needs positive prices, got p_to={} p_from={}; '
            'use marginal_value() instead'.format(p_to, p_from)
        )
    _check_loss(r)
    # product form keeps p_to == p_from / (1 - r) on the boundary
    return p_to * (1 - r) > p_from


def case_condition(p_i, p_j, r):
    """
    Which of the two flow cases holds for positive prices: 1 when power
    should go toward region i, 2 when toward region j, None otherwise.
    """
    if flow_condition(p_i, p_j, r):
        return 1
    if flow_condition(p_j, p_i, r):
        return 2
    return None


def directional_margins(p_i, p_j, r, r_b=0.0):
    """
    Biased margins per MWh of (flow toward j, flow toward i), i.e. of
    (A_TO_B, B_TO_A) when i is endpoint_a.
    """
    toward_j = p_j - p_i - r * p_j - r_b
    toward_i = p_i - p_j - r * p_i - r_b
    return toward_j, toward_i


def marginal_value(p_i, p_j, r):
    _check_loss(r)
    toward_j, toward_i = directional_margins(p_i, p_j, r)
    return max(toward_i, toward_j, 0.0)


def pairwise_profit(p_i, p_j, r, x, duration_h=1.0):
    _check_quantity(x)
    return x * duration_h * marginal_value(p_i, p_j, r)


def pairwise_profit_biased(p_i, p_j, r, x, r_b, duration_h=1.0):
    _check_quantity(x)
    _check_loss(r)
    if not r_b >= 0:
        raise DomainError('Bias must be >= 0: {}'.format(r_b))
    toward_j, toward_i = directional_margins(p_i, p_j, r, r_b)
    return x * duration_h * max(toward_i, toward_j, 0.0)


def optimal_flow(p_i, p_j, r, x_max, r_b=0.0, duration_h=1.0, timestep=0):
    """
    Profit is linear in x, so the best dispatch is all or nothing: full
    capacity toward the dearer endpoint when the biased margin is
    positive, otherwise idle. Ties between directions go to A_TO_B.
    """
    _check_loss(r)
    if not x_max >= 0:
        raise DomainError('x_max must be >= 0: {}'.format(x_max))
    if not r_b >= 0:
        raise DomainError('Bias must be >= 0: {}'.format(r_b))

    toward_b, toward_a = directional_margins(p_i, p_j, r, r_b)

    if toward_b > 0 and toward_b >= toward_a:
        direction, margin = A_TO_B, toward_b
    elif toward_a > 0:
        direction, margin = B_TO_A, toward_a
    else:
        direction, margin = IDLE, 0.0

    if direction == IDLE or x_max == 0:
        return FlowDecision(timestep, IDLE, 0.0, margin, 0.0)
    return FlowDecision(
        timestep, direction, x_max, margin, x_max * duration_h * margin
    )
