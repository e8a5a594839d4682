#!/usr/bin/env python3

# Hvdcarb
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
Hvdcarb. Profit-maximizing dispatch of lossy HVDC interconnectors.

Usage:
    hvdcarb evaluate <link> <timestep> [options]
    hvdcarb schedule [<link>] [options]
    hvdcarb wheel <area1> <area2> <area3> <link12> <link23> <timestep> [options]
    hvdcarb case-ireland [options]
    hvdcarb plot-data [options]
    hvdcarb (-h | --help)
    hvdcarb --version

Actions:
    evaluate <link> <timestep>  Best flow of one link at one timestep
    schedule                    Schedule every link over the horizon
    schedule <link>             Schedule a single link over the horizon
    wheel ...                   Wheeling through area1 - area2 - area3
                                over link12 and link23, both directions
    case-ireland                Reproduce the Irish case study and compare
                                it with the published figures
    plot-data                   Per-link lambda, dispatch and cumulative
                                profit as long-format CSV

Options:
    -n, --network=<path>        Network configuration file. Defaults to
                                the bundled Irish case study, found under
                                $HVDCARB_DATA when that is set.
    -p, --prices=<path>         Price CSV replacing the network's prices.
    -c, --capacity=<path>       Capacity CSV of dynamic limits X_max^t.
    -b, --bias=<eur_per_mwh>    Margin R_b a trade must clear to dispatch.
                                Dispatch is all-or-nothing, so any positive
                                margin runs the link at full capacity and
                                small price wiggles flip it on and off; a
                                bias filters those low-return trades.
                                [default: 0]
    -d, --duration-hours=<h>    Length of one timestep in hours. [default: 1]
    --from=<t>                  First timestep of the horizon.
    --to=<t>                    Last timestep of the horizon.
    -o, --out=<path>            Write the report to <path>.
    -f, --format=<fmt>          Report format, csv or structured.
                                [default: csv]
    -t, --transit-loss=<c>      Losses inside the transit area when
                                wheeling. [default: 0.01]
    -x, --quantity=<mw>         Power injected at the wheeling origin.
                                [default: 100]
    -w, --workers=<n>           Threads for portfolio scheduling.
                                [default: 1]
    -v, --verbose               Log debug messages to stderr.

Exit codes:
    0 success, 3 parse error, 4 validation error, 5 unknown link, region
    or timestep, 6 horizon mismatch, 7 capacity exceeded, 8 bad argument.

"""

import sys
import logging
from docopt import docopt

import hvdcarb.core
from hvdcarb.errors import DomainError
from hvdcarb.errors import HvdcError
from hvdcarb.errors import ParseError

version = '0.1.0'


def _number(args, option, kind=float):
    value = args.get(option)
    if value is None:
        return None
    try:
        return kind(value)
    except ValueError:
        raise DomainError('{} needs a number, got {!r}'.format(
            option, value)) from None


def main(argv=None):
    args = docopt(__doc__, argv=argv, version=version)

    logging.basicConfig(
        level=logging.DEBUG if args['--verbose'] else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )

    try:
        config = hvdcarb.core.run_config(
            network=args['--network'],
            prices=args['--prices'],
            capacity=args['--capacity'],
            start=_number(args, '--from', int),
            end=_number(args, '--to', int),
            bias=_number(args, '--bias'),
            duration_h=_number(args, '--duration-hours'),
            out=args['--out'],
            fmt=args['--format'],
            workers=_number(args, '--workers', int),
        )

        if args['evaluate']:
            hvdcarb.core.evaluate(
                config,
                link_id=args['<link>'],
                timestep=_number(args, '<timestep>', int),
            )

        elif args['schedule']:
            hvdcarb.core.schedule(config, link_id=args['<link>'])

        elif args['wheel']:
            hvdcarb.core.wheel(
                config,
                areas=(args['<area1>'], args['<area2>'], args['<area3>']),
                links=(args['<link12>'], args['<link23>']),
                timestep=_number(args, '<timestep>', int),
                transit_loss=_number(args, '--transit-loss'),
                quantity=_number(args, '--quantity'),
            )

        elif args['case-ireland']:
            hvdcarb.core.case_ireland(config)

        elif args['plot-data']:
            hvdcarb.core.plot_data(config)

    except HvdcError as err:
        print('{}: {}'.format(type(err).__name__, err), file=sys.stderr)
        return err.exit_code

    except OSError as err:
        # unreadable input files count as parse errors
        print('{}: {}'.format(type(err).__name__, err), file=sys.stderr)
        return ParseError.exit_code

    return 0


if __name__ == "__main__":
    sys.exit(main())
