# Hvdcarb Horizon Scheduler Tests
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

from unittest import TestCase
from tests.utils import close
from tests.utils import random_link_instance
from tests.utils import seeded
from tests.utils import three_steps
from tests.utils import with_case_study

from hvdcarb.arbitrage import A_TO_B
from hvdcarb.arbitrage import B_TO_A
from hvdcarb.arbitrage import IDLE
from hvdcarb.arbitrage import BiasPolicy
from hvdcarb.errors import AlignmentError
from hvdcarb.errors import DomainError
from hvdcarb.errors import ResolutionError
from hvdcarb.market import CapacityProfile
from hvdcarb.market import Interconnector
from hvdcarb.market import Network
from hvdcarb.market import PriceSeries
from hvdcarb.market import Region
from hvdcarb.scheduler import extrapolate_annual
from hvdcarb.scheduler import lp_oracle
from hvdcarb.scheduler import lp_relaxation
from hvdcarb.scheduler import schedule_link
from hvdcarb.scheduler import schedule_portfolio

CELTIC = Interconnector('celtic', 'ireland', 'france', 700, 0.0575)


class TestScheduleLink(TestCase):
    def test_celtic_single_hour(self):
        schedule = schedule_link(PriceSeries('ireland', [(1, 100)]),
                                 PriceSeries('france', [(1, 50)]), CELTIC)
        self.assertAlmostEqual(schedule.total_profit, 30975.0, places=6)
        self.assertEqual(schedule.decisions[0].direction, B_TO_A)

    def test_three_steps(self):
        schedule = schedule_link(*three_steps())
        self.assertEqual([d.direction for d in schedule.decisions],
                         [B_TO_A, IDLE, A_TO_B])
        self.assertEqual([d.quantity_mw for d in schedule.decisions],
                         [100.0, 0.0, 50.0])
        profits = [d.profit for d in schedule.decisions]
        self.assertAlmostEqual(profits[0], 4000.0, places=6)
        self.assertEqual(profits[1], 0.0)
        self.assertAlmostEqual(profits[2], 400.0, places=6)
        self.assertAlmostEqual(schedule.total_profit, 4400.0, places=6)
        self.assertEqual(schedule.active_timesteps, frozenset([1, 3]))

    def test_equal_prices_all_idle(self):
        link = Interconnector('l', 'a', 'b', 100, 0.05)
        steps = [(t, 40 + t) for t in range(1, 25)]
        schedule = schedule_link(PriceSeries('a', steps),
                                 PriceSeries('b', steps), link)
        self.assertTrue(all(d.direction == IDLE for d in schedule.decisions))
        self.assertEqual(schedule.total_profit, 0.0)

    def test_default_capacity(self):
        prices_a, prices_b, link, _ = three_steps()
        schedule = schedule_link(prices_a, prices_b, link)
        self.assertEqual(schedule.decisions[2].quantity_mw, 100.0)

    def test_duration(self):
        schedule = schedule_link(*three_steps(), duration_h=0.5)
        self.assertAlmostEqual(schedule.total_profit, 2200.0, places=6)
        with self.assertRaises(DomainError):
            schedule_link(*three_steps(), duration_h=0)

    def test_alignment_error(self):
        prices_a, _, link, capacity = three_steps()
        prices_b = PriceSeries('b', [(1, 50), (2, 80)])
        with self.assertRaises(AlignmentError) as ctx:
            schedule_link(prices_a, prices_b, link, capacity)
        self.assertEqual(ctx.exception.missing, (3,))
        self.assertIn('missing timesteps: 3', str(ctx.exception))

    def test_wrong_endpoints(self):
        prices_a, prices_b, link, capacity = three_steps()
        with self.assertRaises(ResolutionError):
            schedule_link(prices_b, prices_a, link, capacity)
        with self.assertRaises(ResolutionError):
            schedule_link(prices_a, prices_b, link,
                          CapacityProfile('other', capacity.steps))

    def test_within_capacity(self):
        rng = seeded(20)
        for _ in range(100):
            instance = random_link_instance(rng)
            schedule = schedule_link(*instance)
            capacity = instance[3]
            for decision in schedule.decisions:
                self.assertLessEqual(decision.quantity_mw,
                                     capacity.x_max_at(decision.timestep))
            self.assertEqual(schedule.timesteps, capacity.timesteps)


class TestOracle(TestCase):
    def test_celtic(self):
        prices_a = PriceSeries('ireland', [(1, 100)])
        prices_b = PriceSeries('france', [(1, 50)])
        self.assertEqual(lp_oracle(prices_a, prices_b, CELTIC),
                         schedule_link(prices_a, prices_b, CELTIC))

    def test_random_instances_bit_identical(self):
        rng = seeded(21)
        for _ in range(1000):
            instance = random_link_instance(rng)
            self.assertEqual(lp_oracle(*instance), schedule_link(*instance))
            bias = BiasPolicy(float(rng.uniform(0, 20)))
            self.assertEqual(lp_oracle(*instance, bias=bias),
                             schedule_link(*instance, bias=bias))

    def test_equal_prices(self):
        link = Interconnector('l', 'a', 'b', 100, 0.05)
        steps = [(1, 30), (2, 60)]
        prices_a, prices_b = PriceSeries('a', steps), PriceSeries('b', steps)
        self.assertEqual(lp_oracle(prices_a, prices_b, link).total_profit, 0)
        self.assertEqual(lp_oracle(prices_a, prices_b, link),
                         schedule_link(prices_a, prices_b, link))


class TestProperties(TestCase):
    def test_bang_bang(self):
        rng = seeded(23)
        for _ in range(200):
            instance = random_link_instance(rng)
            bias = BiasPolicy(rng.uniform(0, 10))
            capacity = instance[3]
            for d in schedule_link(*instance, bias=bias).decisions:
                x_max = capacity.x_max_at(d.timestep)
                self.assertIn(d.quantity_mw, (0.0, x_max))
                if x_max > 0:
                    self.assertEqual(d.quantity_mw == x_max,
                                     d.marginal_value > 0)

    def test_separability(self):
        rng = seeded(24)
        for _ in range(100):
            prices_a, prices_b, link, capacity = random_link_instance(rng)
            order = rng.permutation(len(prices_a.steps))
            timesteps = prices_a.timesteps

            def permuted(series):
                values = [series.values[k] for k in order]
                return series._replace(steps=tuple(zip(timesteps, values)))

            base = schedule_link(prices_a, prices_b, link, capacity)
            shuffled = schedule_link(permuted(prices_a), permuted(prices_b),
                                     link, permuted(capacity))
            self.assertEqual(shuffled.total_profit, base.total_profit)
            for position, k in enumerate(order):
                self.assertEqual(shuffled.decisions[position][1:],
                                 base.decisions[k][1:])

    def test_capacity_scaling(self):
        rng = seeded(25)
        for _ in range(200):
            prices_a, prices_b, link, capacity = random_link_instance(rng)
            k = rng.uniform(0, 5)
            base = schedule_link(prices_a, prices_b, link, capacity)
            scaled = schedule_link(prices_a, prices_b, link,
                                   capacity.scaled(k))
            self.assertTrue(close(scaled.total_profit, k * base.total_profit,
                                  abs_=1e-6))

    def test_bias_monotonicity(self):
        rng = seeded(26)
        for _ in range(100):
            instance = random_link_instance(rng)
            previous = None
            for r_b in (0.0, 1.0, 5.0, 20.0, 100.0, 1000.0):
                schedule = schedule_link(*instance, bias=BiasPolicy(r_b))
                if previous is not None:
                    self.assertLessEqual(schedule.total_profit,
                                         previous.total_profit)
                    self.assertLessEqual(schedule.active_timesteps,
                                         previous.active_timesteps)
                previous = schedule
            self.assertEqual(previous.total_profit, 0.0)

    def test_lp_relaxation_agrees(self):
        rng = seeded(27)
        for _ in range(50):
            instance = random_link_instance(rng, horizon=48)
            bias = BiasPolicy(rng.uniform(0, 5))
            relaxed = lp_relaxation(*instance, bias=bias)
            exact = schedule_link(*instance, bias=bias)
            self.assertAlmostEqual(
                relaxed.total_profit, exact.total_profit,
                delta=1e-6 * max(1.0, exact.total_profit),
            )
            self.assertEqual(len(relaxed.quantities), 48)

    def test_lp_relaxation_three_steps(self):
        relaxed = lp_relaxation(*three_steps())
        self.assertAlmostEqual(relaxed.total_profit, 4400.0, places=4)
        self.assertAlmostEqual(relaxed.quantities[0], 100.0, places=4)
        self.assertAlmostEqual(relaxed.quantities[2], 50.0, places=4)


class TestPortfolio(TestCase):
    @with_case_study()
    def test_case_study(self, bundle):
        result = schedule_portfolio(bundle.network)
        totals = result.totals
        self.assertEqual(sorted(totals),
                         ['celtic', 'ewi', 'greenlink', 'moyle'])
        self.assertAlmostEqual(totals['celtic'], 30975.0, places=6)
        self.assertAlmostEqual(totals['ewi'], 11195.0, places=6)
        self.assertAlmostEqual(totals['greenlink'], 11500.0, places=6)
        self.assertAlmostEqual(totals['moyle'], 9619.0, places=6)
        self.assertAlmostEqual(result.grand_total, 63289.0, places=6)
        self.assertAlmostEqual(result.annualized, 554411640.0, places=2)
        self.assertEqual(result.horizon_hours, 1.0)

    @with_case_study()
    def test_workers_do_not_change_result(self, bundle):
        self.assertEqual(schedule_portfolio(bundle.network, workers=4),
                         schedule_portfolio(bundle.network))

    @with_case_study()
    def test_capacity_override(self, bundle):
        capacities = {'celtic': CapacityProfile('celtic', [(1, 350)])}
        result = schedule_portfolio(bundle.network, capacities)
        self.assertAlmostEqual(result.schedule('celtic').total_profit,
                               15487.5, places=6)
        with self.assertRaises(ResolutionError):
            result.schedule('atlantis')

    @with_case_study()
    def test_bias(self, bundle):
        result = schedule_portfolio(bundle.network, bias=BiasPolicy(23.5))
        self.assertEqual(result.schedule('ewi').total_profit, 0.0)
        self.assertAlmostEqual(result.grand_total, (44.25 - 23.5) * 700,
                               places=6)

    def test_no_links(self):
        result = schedule_portfolio(Network(regions=[Region('a')]))
        self.assertEqual(result.grand_total, 0.0)
        self.assertEqual(result.annualized, 0.0)
        self.assertEqual(result.schedules, ())

    def test_errors_name_the_link(self):
        network = Network(
            regions=[Region('a'), Region('b')],
            interconnectors=[Interconnector('l', 'a', 'b', 10, 0.01)],
            price_series=[PriceSeries('a', [(1, 1), (2, 2)]),
                          PriceSeries('b', [(1, 3)])],
        )
        with self.assertRaises(AlignmentError) as ctx:
            schedule_portfolio(network)
        self.assertIn('link l', str(ctx.exception))

    def test_window(self):
        prices_a, prices_b, link, _ = three_steps()
        network = Network([Region('a'), Region('b')], [link],
                          [prices_a, prices_b])
        result = schedule_portfolio(network, start=2, end=3)
        self.assertEqual(result.schedule('l').timesteps, (2, 3))
        self.assertAlmostEqual(result.grand_total, 800.0, places=6)
        self.assertAlmostEqual(result.annualized, 400.0 * 8760, places=4)


class TestExtrapolateAnnual(TestCase):
    def test_examples(self):
        self.assertEqual(extrapolate_annual(61414), 537986640)
        self.assertEqual(extrapolate_annual(63289), 554411640)
        self.assertEqual(extrapolate_annual(0), 0)
        self.assertGreater(extrapolate_annual(61414), 525000000)

    def test_negative(self):
        with self.assertRaises(DomainError):
            extrapolate_annual(-1)
