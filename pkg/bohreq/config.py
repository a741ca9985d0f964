import argparse
import os

from .__version__ import __version__


class SingletonMeta(type):
    """
    A straightforward metaclass for implementing singleton so that tolerances
    and sampler limits changed by the command line are seen by every module
    """

    def __call__(cls, *args, **kwargs):
        """
        constructs the object if it's never constructed before, else return
        the copy constructed last time. On subsequent invocations no args or
        kwargs need to be passed even if the constructor accepts some.

        :param args: args passed to the object constructor and initializer
        :param kwargs: kwargs passed to the object constructor and initializer
        :return: the object, whether newly created or cached
        """
        if hasattr(cls, '_instance'):
            return cls._instance
        else:
            obj = cls.__new__(cls, *args, **kwargs)
            obj.__init__(*args, **kwargs)
            cls._instance = obj
            return obj


class Config(metaclass=SingletonMeta):
    """
    A simple class holding the numerical settings shared by the library and
    the command line. It's a singleton
    """

    def __init__(self):
        "Initialize the object to default values"
        self.reset()

    def reset(self):
        """restore every setting to its default"""
        self.tol_modulus = 1e-9
        self.tol_phase = 1e-8
        self.grid_cap = 2 ** 21
        self.chunk_size = 2 ** 16
        self.sigma_density = 25
        self.open_margin = 1e-6
        self.resolution_factor = 3.0
        self.svg_max_points = 50_000
        self.brute_force_max_dim = 4
        self.fill_tolerance = 0.05
        self.seed = 0
        self.workers = force_workers or 1
        self.override_strip = False
        self.debug = False


force_workers = None
try:
    force_workers = int(os.environ.get("BOHREQ_WORKERS"))
except (TypeError, ValueError):
    pass

config = Config()

# flags shared by every command
common = argparse.ArgumentParser(add_help=False)
g = common.add_argument_group('Common options')
g.add_argument('--tol-modulus', type=float, default=None, metavar='F',
               help='Relative tolerance when comparing coefficient moduli '
                    '(default 1e-9).')
g.add_argument('--tol-phase', type=float, default=None, metavar='F',
               help='Phase tolerance per kernel row, scaled by 1 + |m|_1 '
                    '(default 1e-8).')
g.add_argument('--seed', type=int, default=None, metavar='U64',
               help='Seed for quasi-random torus sampling.')
g.add_argument('--override-strip', action='store_true',
               help='Allow evaluation outside the declared vertical strip.')
if not force_workers:
    g.add_argument('--workers', type=int, default=None, metavar='N',
                   help='Worker threads for nearest-neighbour queries. If '
                        'BOHREQ_WORKERS env is set, this option will be '
                        'ignored.')
g.add_argument('--debug', action='store_true', help='Enable debug logging.')

# flags shared by the sampling commands
sampling = argparse.ArgumentParser(add_help=False)
s = sampling.add_argument_group('Sampling options')
mode = s.add_mutually_exclusive_group()
mode.add_argument('--grid', type=int, default=None, metavar='N',
                  help='Sample the full torus grid with N points per '
                       'dimension (default 32).')
mode.add_argument('--samples', type=int, default=None, metavar='N',
                  help='Sample N scrambled Halton points on the torus instead '
                       'of a full grid.')
s.add_argument('--out', default=None, metavar='PATH',
               help='Write the cloud to PATH.')
s.add_argument('--format', choices=('csv', 'json', 'svg'), default=None,
               help='Output format. Defaults to the suffix of --out, '
                    'else csv.')

parser = argparse.ArgumentParser(
    prog='bohreq',
    description='Bohr equivalence and value sets of exponential sums with '
                'an integral basis.')
parser.add_argument('--version', action='version',
                    version=f'%(prog)s {__version__}')
commands = parser.add_subparsers(dest='command', metavar='COMMAND')
commands.required = True

p = commands.add_parser('check-equiv', parents=[common],
                        help='Decide whether two sums are equivalent.')
p.add_argument('a_path', metavar='A', help='JSON file of the first sum.')
p.add_argument('b_path', metavar='B', help='JSON file of the second sum.')
p.add_argument('--brute-force', type=int, default=None, metavar='GRID',
               help='Use the exhaustive torus scan with GRID points per '
                    'dimension instead of the exact decision procedure.')

p = commands.add_parser('image', parents=[common, sampling],
                        help='Sample the auxiliary image at one sigma.')
p.add_argument('f_path', metavar='F', help='JSON file of the sum.')
p.add_argument('--sigma', type=float, required=True, metavar='F')

p = commands.add_parser('union-image', parents=[common, sampling],
                        help='Sample the union of auxiliary images over a '
                             'sigma interval.')
p.add_argument('f_path', metavar='F', help='JSON file of the sum.')
p.add_argument('--sigma-range', required=True, metavar='LO:HI:COUNT',
               help='Sigma interval and number of sigma values. COUNT may '
                    'be omitted to use the configured density. Write '
                    '--sigma-range=LO:HI when LO is negative.')
p.add_argument('--closed', action='store_true',
               help='Treat the sigma interval as compact (keep endpoints).')

p = commands.add_parser('bf-approx', parents=[common],
                        help='Build a Bochner-Fejer polynomial of a sum.')
p.add_argument('f_path', metavar='F', help='JSON file of the sum.')
p.add_argument('--degrees', required=True, metavar='N,N,...',
               help='One positive degree per basis element.')
p.add_argument('--sigma', type=float, default=0.0, metavar='F')
p.add_argument('--t-range', default='0:50:100', metavar='LO:HI:COUNT',
               help='Vertical segment on which the sup error is measured.')
p.add_argument('--out', default=None, metavar='PATH',
               help='Write the polynomial as a JSON sum to PATH.')

p = commands.add_parser('verify-examples', parents=[common],
                        help='Run the built-in verification suite.')
p.add_argument('--report', choices=('text', 'json'), default='text',
               help='Report format printed on stdout.')
p.add_argument('--out', default=None, metavar='PATH',
               help='Also write the JSON report to PATH.')
p.add_argument('--fill-tolerance', type=float, default=None, metavar='F',
               help='Distance allowed between a disk-fill target and the '
                    'nearest sampled value (default 0.05).')


def init_config(args):
    """copy the parsed flags that override defaults into the config"""
    config.reset()
    config.debug = args.debug
    config.override_strip = args.override_strip
    if args.tol_modulus is not None:
        config.tol_modulus = args.tol_modulus
    if args.tol_phase is not None:
        config.tol_phase = args.tol_phase
    if args.seed is not None:
        config.seed = args.seed
    if force_workers:
        config.workers = force_workers
    elif args.workers is not None:
        config.workers = args.workers
    if getattr(args, 'fill_tolerance', None) is not None:
        config.fill_tolerance = args.fill_tolerance
