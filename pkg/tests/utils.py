# Hvdcarb Test Utilities
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
import shutil
import tempfile
import functools
import contextlib

import numpy as np

from hvdcarb.dataio import load_case_study
from hvdcarb.market import CapacityProfile
from hvdcarb.market import Interconnector
from hvdcarb.market import PriceSeries
from hvdcarb.utils import data_path


def case_file(name):
    return data_path('ireland', name)


def with_folder(files=None, contents=None, param='temp_folder'):
    """
    Runs the test in a fresh temporary folder holding copies of the
    given case-study files and any extra {name: text} contents.
    """
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            with tempfile.TemporaryDirectory() as temp_folder:
                for file in files or ():
                    shutil.copy2(case_file(file), temp_folder)
                for name, text in (contents or {}).items():
                    path = os.path.join(temp_folder, name)
                    with open(path, 'w', encoding='utf-8',
                              newline='') as file:
                        file.write(text)
                kwargs[param] = temp_folder
                return func(*args, **kwargs)
        return wrapper
    return decorator


def with_case_study(param='bundle'):
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            kwargs[param] = load_case_study()
            return func(*args, **kwargs)
        return wrapper
    return decorator


def with_env(**env):
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            saved = {key: os.environ.get(key) for key in env}
            os.environ.update(env)
            try:
                return func(*args, **kwargs)
            finally:
                for key, value in saved.items():
                    if value is None:
                        os.environ.pop(key, None)
                    else:
                        os.environ[key] = value
        return wrapper
    return decorator


def capture(func, *args, **kwargs):
    """Calls func and returns (result, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        result = func(*args, **kwargs)
    return result, out.getvalue(), err.getvalue()


def close(a, b, rel=1e-9, abs_=1e-9):
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_)


def random_link_instance(rng, horizon=None, price_range=(-50.0, 200.0),
                         max_loss=0.2, max_capacity=1000.0):
    """
    A random link with prices on both ends and a dynamic capacity
    profile over a horizon of at most 100 steps.
    """
    if horizon is None:
        horizon = int(rng.integers(1, 101))
    timesteps = list(range(1, horizon + 1))
    link = Interconnector('link', 'a', 'b', max_capacity,
                          float(rng.uniform(0, max_loss)))
    prices_a = PriceSeries('a', zip(timesteps, rng.uniform(*price_range,
                                                           size=horizon)))
    prices_b = PriceSeries('b', zip(timesteps, rng.uniform(*price_range,
                                                           size=horizon)))
    capacity = CapacityProfile('link', zip(
        timesteps, rng.uniform(0, max_capacity, size=horizon)))
    return prices_a, prices_b, link, capacity


def seeded(seed):
    return np.random.default_rng(seed)


def three_steps():
    """Link a-b at r=0.1 earning 4000, 0 and 400 EUR over three hours."""
    link = Interconnector('l', 'a', 'b', 100, 0.1)
    prices_a = PriceSeries('a', [(1, 100), (2, 80), (3, 100)])
    prices_b = PriceSeries('b', [(1, 50), (2, 80), (3, 120)])
    capacity = CapacityProfile('l', [(1, 100), (2, 100), (3, 50)])
    return prices_a, prices_b, link, capacity
