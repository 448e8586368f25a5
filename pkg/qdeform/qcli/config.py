import argparse
from dataclasses import dataclass, replace
import numpy as np
from ..errors import UsageError

COMMANDS = ('eval', 'verify', 'fp-stationary', 'fp-evolve', 'schrod-eigen',
            'schrod-free', 'schrod-evolve')
JSON_COMMANDS = ('verify', 'schrod-eigen')

@dataclass(frozen = True)
class RunConfig:
    """
    One fully resolved run of the command line tool

    Parameters:
    command (str): one of COMMANDS
    q (float): deformation parameter
    epsilon_one (float): classical-limit threshold on |q - 1|
    lambda0 (float or None): outermost lattice point. None picks one per
        command through lattice_extent
    count (int): lattice points per half-line
    branch (str): 'positive' or 'symmetric'
    hbar, mass (float): Schrodinger units
    gamma, alpha (float): Fokker-Planck friction and width
    k (float): wavenumber, also the argument scale of `eval`
    levels (int): eigenpairs requested
    tol_rel (float): series stopping threshold
    dt (float): time step
    steps (int): number of time steps
    scheme (str): 'auto', 'explicit' or 'implicit'
    convention (str): 'argument_scaling' or 'literal_qx'
    output (str): output path, '' for stdout
    format (str): 'csv' or 'json'
    verbose (bool): progress bars and INFO logging
    sweep (tuple or None): (start, stop, n) of a q sweep
    """
    command: str
    q: float = 1.2
    epsilon_one: float = 1e-8
    lambda0: float = None
    count: int = 48
    branch: str = 'positive'
    hbar: float = 1.
    mass: float = 1.
    gamma: float = 1.
    alpha: float = 1.
    k: float = 1.
    levels: int = 3
    tol_rel: float = 1e-14
    dt: float = 1e-4
    steps: int = 100
    scheme: str = 'auto'
    convention: str = 'argument_scaling'
    output: str = ''
    format: str = ''
    verbose: bool = False
    sweep: tuple = None

    def with_q(self, q, output):
        return replace(self, q = float(q), output = output, sweep = None)

class _Parser(argparse.ArgumentParser):
    """
    ArgumentParser that raises UsageError instead of exiting
    """
    def error(self, message):
        raise UsageError(message)

    def exit(self, status = 0, message = None):
        if status:
            raise UsageError(message or 'invalid arguments')
        super().exit(status, message)

def parse_config(argv = None, config_text = None):
    """
    Builds a RunConfig from built-in defaults, then a flat key = value config
    file, then command line flags, each layer overriding the one before

    Parameters:
    argv (list of str or None): command line arguments without the program
        name. None reads sys.argv
    config_text (str or None): config file contents. Overrides --config

    Returns:
    config (RunConfig): resolved configuration
    """
    args = _build_parser().parse_args(argv)
    raw = {}
    lines = {}
    if config_text is None and args.config is not None:
        try:
            with open(args.config, encoding = 'utf-8') as f:
                config_text = f.read()
        except OSError as error:
            raise UsageError(f'cannot read config file: {error}', 'config')
    if config_text is not None:
        for key, (value, line) in parse_config_text(config_text).items():
            raw[key] = value
            lines[key] = line
    for key in _CONVERTERS:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
            lines.pop(key, None)
    values = {}
    for key, value in raw.items():
        values[key] = _convert(key, value, lines.get(key))
    if not values.get('format'):
        values['format'] = 'json' if args.command in JSON_COMMANDS else 'csv'
    sweep = None
    if args.sweep is not None:
        sweep = parse_sweep(args.sweep)
    return RunConfig(command = args.command, sweep = sweep, **values)

def parse_config_text(text):
    """
    Parses flat key = value text. Blank lines and # comments are ignored

    Parameters:
    text (str): config file contents

    Returns:
    entries (dict): key -> (value string, line number)
    """
    entries = {}
    for number, line in enumerate(text.splitlines(), start = 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise UsageError(f"expected 'key = value', got {line!r}",
                             line = number)
        key, value = (part.strip() for part in line.split('=', 1))
        key = key.replace('-', '_')
        if key not in _CONVERTERS:
            raise UsageError('unknown key', key, number)
        entries[key] = (value, number)
    return entries

def parse_sweep(text):
    """
    Parses 'q=a:b:n' into (a, b, n)
    """
    try:
        key, span = text.split('=', 1)
        start, stop, n = span.split(':')
        start, stop, n = float(start), float(stop), int(n)
    except ValueError:
        raise UsageError(f"expected 'q=start:stop:n', got {text!r}", 'sweep')
    if key.strip() != 'q':
        raise UsageError('only q can be swept', 'sweep')
    if n < 1 or not start > 0 or not stop > 0:
        raise UsageError('sweep needs n >= 1 and positive q bounds', 'sweep')
    return (start, stop, n)

def sweep_values(sweep):
    start, stop, n = sweep
    return np.linspace(start, stop, n)

################################################################################
######################### Utility functions ####################################
################################################################################

def _positive_float(value):
    x = float(value)
    if not np.isfinite(x) or x <= 0:
        raise ValueError('must be a positive number')
    return x

def _non_negative_float(value):
    x = float(value)
    if not np.isfinite(x) or x < 0:
        raise ValueError('must be a non-negative number')
    return x

def _finite_float(value):
    x = float(value)
    if not np.isfinite(x):
        raise ValueError('must be a finite number')
    return x

def _positive_int(value):
    x = int(value)
    if x < 1:
        raise ValueError('must be a positive integer')
    return x

def _count(value):
    x = int(value)
    if x < 2:
        raise ValueError('must be an integer >= 2')
    return x

def _choice(*options):
    def convert(value):
        value = str(value).strip()
        if value not in options:
            raise ValueError(f'must be one of {", ".join(options)}')
        return value
    return convert

def _boolean(value):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ('1', 'true', 'yes', 'on'):
        return True
    if text in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError('must be true or false')

_CONVERTERS = {
    'q': _positive_float,
    'epsilon_one': _non_negative_float,
    'lambda0': _positive_float,
    'count': _count,
    'branch': _choice('positive', 'symmetric'),
    'hbar': _positive_float,
    'mass': _positive_float,
    'gamma': _positive_float,
    'alpha': _positive_float,
    'k': _finite_float,
    'levels': _positive_int,
    'tol_rel': _positive_float,
    'dt': _positive_float,
    'steps': _positive_int,
    'scheme': _choice('auto', 'explicit', 'implicit'),
    'convention': _choice('argument_scaling', 'literal_qx'),
    'output': str,
    'format': _choice('csv', 'json'),
    'verbose': _boolean,
}

def _convert(key, value, line):
    try:
        return _CONVERTERS[key](value)
    except (TypeError, ValueError) as error:
        raise UsageError(f'invalid value {value!r}: {error}', key, line)

def _build_parser():
    parser = _Parser(prog = 'qdeform', description = 'q-deformed calculus, '
                     'Fokker-Planck and Schrodinger numerics')
    parser.add_argument('command', choices = COMMANDS)
    parser.add_argument('--config', default = None,
                        help = 'flat key = value config file')
    parser.add_argument('--sweep', default = None,
                        help = "q sweep 'q=start:stop:n'")
    parser.add_argument('--verbose', '-v', action = 'store_true',
                        default = None)
    for key in _CONVERTERS:
        if key == 'verbose':
            continue
        parser.add_argument('--' + key.replace('_', '-'), dest = key,
                            default = None)
    return parser
