# Hvdcarb Core
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

import sys
import logging
from collections import namedtuple

from hvdcarb.arbitrage import BiasPolicy
from hvdcarb.arbitrage import optimal_flow
from hvdcarb.dataio import load_capacities
from hvdcarb.dataio import load_case_study
from hvdcarb.dataio import load_network
from hvdcarb.dataio import load_prices
from hvdcarb.dataio import write_plot_data
from hvdcarb.dataio import write_report
from hvdcarb.errors import DomainError
from hvdcarb.errors import ValidationError
from hvdcarb.market import validate_network
from hvdcarb.report import CaseReport
from hvdcarb.scheduler import extrapolate_annual
from hvdcarb.scheduler import schedule_link
from hvdcarb.scheduler import schedule_portfolio
from hvdcarb.wheeling import WheelingChain
from hvdcarb.wheeling import evaluate_wheel

log = logging.getLogger(__name__)

RunConfig = namedtuple('RunConfig', [
    'network', 'prices', 'capacity', 'start', 'end', 'bias', 'duration_h',
    'out', 'fmt', 'workers',
])


def run_config(network=None, prices=None, capacity=None, start=None,
               end=None, bias=0.0, duration_h=1.0, out=None, fmt='csv',
               workers=1):
    bias = BiasPolicy(bias)
    if not duration_h > 0:
        raise DomainError('Step duration must be > 0: {}'.format(duration_h))
    if fmt not in ('csv', 'structured'):
        raise DomainError('Unknown report format: {}'.format(fmt))
    if workers < 1:
        raise DomainError('Need at least one worker: {}'.format(workers))
    return RunConfig(network, prices, capacity, start, end, bias,
                     duration_h, out, fmt, workers)


Inputs = namedtuple('Inputs', ['network', 'capacities', 'expected'])


def load_inputs(config):
    """
    Network, capacity profiles and, for the bundled case study, the
    ledger of published figures.
    """
    if config.network:
        network, expected = load_network(config.network), None
    else:
        bundle = load_case_study()
        network, expected = bundle.network, bundle.expected

    if config.prices:
        network = network.with_prices(load_prices(config.prices))
        report = validate_network(network)
        if report:
            raise ValidationError(report)

    capacities = {}
    if config.capacity:
        capacities = load_capacities(config.capacity)
    return Inputs(network, capacities, expected)


def _footnotes(expected, totals):
    if expected is None:
        return
    for link_id, total in totals.items():
        published = expected.get(link_id, 'published')
        if published is not None \
                and abs(published - total) > CaseReport.tolerance:
            yield '* {}: computed {:,.2f} EUR, published {:,.2f} EUR'.format(
                link_id, total, published)
            note = expected.note(link_id)
            if note:
                yield '  {}'.format(note)


def evaluate(config, link_id, timestep):
    inputs = load_inputs(config)
    network = inputs.network
    link = network.link(link_id)

    p_a = network.prices(link.endpoint_a).price_at(timestep)
    p_b = network.prices(link.endpoint_b).price_at(timestep)
    x_max = link.capacity_mw
    if link.id in inputs.capacities:
        x_max = inputs.capacities[link.id].x_max_at(timestep)

    decision = optimal_flow(p_a, p_b, link.loss_fraction, x_max,
                            config.bias.r_b, config.duration_h, timestep)

    print('Link:      {}'.format(link))
    print('Timestep:  {}'.format(timestep))
    print('Prices:    {} {} / {} {} EUR/MWh'.format(
        link.endpoint_a, p_a, link.endpoint_b, p_b))
    print('Direction: {}'.format(decision.direction))
    print('Quantity:  {:g} MW'.format(decision.quantity_mw))
    print('Lambda:    {:.4f} EUR/MWh'.format(decision.marginal_value))
    print('Profit:    {:.2f} EUR'.format(decision.profit))
    return decision


def schedule(config, link_id=None):
    inputs = load_inputs(config)
    network = inputs.network

    if link_id:
        link = network.link(link_id)
        capacity = inputs.capacities.get(link.id)
        if capacity is not None:
            capacity = capacity.select(config.start, config.end)
        result = schedule_link(
            network.prices(link.endpoint_a).select(config.start, config.end),
            network.prices(link.endpoint_b).select(config.start, config.end),
            link, capacity, config.bias, config.duration_h,
        )
        totals = {link.id: result.total_profit}
        grand_total = result.total_profit
        hours = len(result.decisions) * config.duration_h
        annualized = extrapolate_annual(grand_total / hours) if hours else 0.0
    else:
        result = schedule_portfolio(
            network, inputs.capacities, config.bias, config.duration_h,
            config.start, config.end, config.workers,
        )
        totals = result.totals
        grand_total, annualized = result.grand_total, result.annualized

    if config.out:
        write_report(result, config.fmt, config.out, expected=inputs.expected)
        log.info('Wrote %s report to %s', config.fmt, config.out)

    for link_id_, total in sorted(totals.items()):
        print('{:<12} {:>16,.2f} EUR'.format(link_id_, total))
    print('Grand total: {:,.2f} EUR'.format(grand_total))
    print('Annualized:  {:,.2f} EUR'.format(annualized))

    footnotes = list(_footnotes(inputs.expected, totals))
    if footnotes:
        print()
        print(*footnotes, sep='\n')
    return result


def wheel(config, areas, links, timestep, transit_loss, quantity):
    inputs = load_inputs(config)
    network = inputs.network
    chain = WheelingChain.resolve(network, *areas, *links,
                                  transit_loss_c=transit_loss)
    prices = chain.prices_at(network, timestep)
    results = evaluate_wheel(chain, prices, quantity, config.duration_h)

    print('Chain:    {}'.format(chain))
    print('Prices:   {}'.format(', '.join(
        '{} {}'.format(area, prices[area]) for area in chain.areas)))
    for result in results:
        print(result)

    if config.out:
        write_report(results, config.fmt, config.out, link_id=chain.id,
                     timestep=timestep)
    return results


def case_ireland(config=None):
    if config is None:
        config = run_config()
    bundle = load_case_study()
    expected = bundle.expected
    result = schedule_portfolio(bundle.network, bias=config.bias,
                                duration_h=config.duration_h,
                                workers=config.workers)

    report = CaseReport(
        title='Irish interconnectors, one hour at case-study prices'
    )
    for link_id in expected.keys():
        if link_id in result.totals:
            computed = result.totals[link_id]
        elif link_id == 'total':
            computed = result.grand_total
        else:
            continue
        oracle = expected.get(link_id, 'oracle')
        if oracle is not None \
                and abs(computed - oracle) <= CaseReport.tolerance:
            provenance = 'oracle'
        else:
            provenance = 'computed'
        report.add(link_id, computed, expected.get(link_id, 'published'),
                   provenance, expected.note(link_id))

    print(report)
    print()

    floor = expected.get('annualized', 'published_floor')
    print('Annualized (computed): {:,.2f} EUR'.format(result.annualized))
    published_total = expected.get('total', 'published')
    if published_total is not None:
        print('Annualized (published total): {:,.2f} EUR'.format(
            extrapolate_annual(published_total)))
    if floor is not None:
        print('Published floor: {:,.2f} EUR, exceeded: {}'.format(
            floor, 'yes' if result.annualized > floor else 'no'))

    if config.out:
        write_report(result, config.fmt, config.out, expected=expected)
    return report


def plot_data(config):
    inputs = load_inputs(config)
    result = schedule_portfolio(
        inputs.network, inputs.capacities, config.bias, config.duration_h,
        config.start, config.end, config.workers,
    )
    document = write_plot_data(result, config.out)
    if not config.out:
        sys.stdout.write(document)
    return document
