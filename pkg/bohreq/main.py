import json
import math
import sys
from typing import List, Optional, Tuple

import numpy as np

from . import sums
from .auxiliary import Sampler, SigmaRange, sample_image, sample_union
from .cloud import ImageCloud, infer_format
from .config import config, init_config, parser
from .debug import debug_print, end_print, init_print
from .equivalence import (Tolerances, brute_force_equivalence,
                          check_equivalence, co_express)
from .exponents import BohrError, InvalidInputError
from .report import use_color
from .verify import run_checks

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


def parse_triple(text: str, what: str) -> Tuple[float, float, int]:
    """LO:HI:COUNT"""
    parts = text.split(':')
    if len(parts) != 3:
        raise InvalidInputError(f'{what} {text!r} is not LO:HI:COUNT')
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        raise InvalidInputError(f'bad {what} {text!r}: {e}') from None


def parse_degrees(text: str) -> List[float]:
    try:
        return [math.inf if d.strip() in ('inf', 'oo') else float(d) for d in text.split(',')]
    except ValueError as e:
        raise InvalidInputError(f'bad degrees {text!r}: {e}') from None


def sampler_from(args) -> Sampler:
    return Sampler(grid=args.grid, samples=args.samples, seed=args.seed)


def emit_cloud(cloud: ImageCloud, args) -> int:
    """write the cloud to --out with a summary on stdout, or the cloud itself to stdout"""
    fmt = args.format or infer_format(args.out)
    if args.out:
        cloud.write(args.out, fmt)
        summary = {'points': len(cloud), 'max_modulus': cloud.max_modulus() if len(cloud) else None,
                   'out': args.out, 'format': fmt}
        print(json.dumps(summary))
    elif fmt == 'csv':
        cloud.to_csv(sys.stdout)
    elif fmt == 'json':
        print(json.dumps(cloud.to_dict()))
    else:
        cloud.to_svg(sys.stdout)
    return EXIT_OK


def cmd_check_equiv(args) -> int:
    a, b = co_express(sums.load(args.a_path), sums.load(args.b_path))
    if args.brute_force is not None:
        verdict = brute_force_equivalence(a, b, args.brute_force)
    else:
        verdict = check_equivalence(a, b, Tolerances())
    print(verdict.to_json())
    return EXIT_OK if verdict.is_equivalent else EXIT_NEGATIVE


def cmd_image(args) -> int:
    f = sums.load(args.f_path)
    cloud = sample_image(f, args.sigma, sampler_from(args))
    return emit_cloud(cloud, args)


def cmd_union_image(args) -> int:
    f = sums.load(args.f_path)
    e = SigmaRange.parse(args.sigma_range, closed=args.closed)
    cloud = sample_union(f, e, sampler_from(args))
    return emit_cloud(cloud, args)


def cmd_bf_approx(args) -> int:
    f = sums.load(args.f_path)
    degrees = parse_degrees(args.degrees)
    lo, hi, count = parse_triple(args.t_range, 't range')
    p = sums.bochner_fejer(f, degrees)

    line = sums.vertical_line_samples(f, args.sigma, lo, hi, count)
    approx = sums.evaluate(p, args.sigma + 1j * line.ts)
    result = {
        'terms': len(p),
        'sup_error': float(np.abs(approx - line.points).max()),
        'bound': sums.fejer_error_bound(f, degrees, args.sigma),
    }
    if args.out:
        sums.dump(p, args.out)
        result['out'] = args.out
    else:
        result['polynomial'] = sums.to_dict(p)
    print(json.dumps(result))
    return EXIT_OK


def cmd_verify_examples(args) -> int:
    report = run_checks()
    if args.report == 'json':
        print(report.to_json(indent=2))
    else:
        print(report.to_text(color=use_color(sys.stdout)))
    if args.out:
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(report.to_json(indent=2))
            f.write('\n')
    return EXIT_OK if report.passed else EXIT_NEGATIVE


COMMANDS = {
    'check-equiv': cmd_check_equiv,
    'image': cmd_image,
    'union-image': cmd_union_image,
    'bf-approx': cmd_bf_approx,
    'verify-examples': cmd_verify_examples,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command and return its exit code: 0 for success or an
    equivalent pair, 1 for a negative result, 2 for usage and input errors.
    """
    args = parser.parse_args(argv)
    init_config(args)
    init_print()
    debug_print(f'command {args.command}, tolerances {config.tol_modulus}/{config.tol_phase}')
    try:
        return COMMANDS[args.command](args)
    except (BohrError, OSError, json.JSONDecodeError) as e:
        print(f'bohreq: error: {e}', file=sys.stderr)
        return EXIT_USAGE
    finally:
        end_print()


def run():
    """Run the program. Put inside a function so it can be imported"""
    sys.exit(main())
