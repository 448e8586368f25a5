import logging
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import numpy as np
import pandas as pd
from tqdm.auto import tqdm
from .config import parse_config, sweep_values
from .data_io import (make_eval_table, make_fp_stationary_table,
                      make_fp_evolve_table, make_spectrum_table,
                      make_plane_wave_table, make_norm_trace_table,
                      spectrum_summary, table_summary, write_csv, write_json)
from .verify import run_verification
from ..util import suffixed_path
from ..errors import QDeformError, UsageError, ReciprocalPathWarning
from ..qcore.deformation import DeformationParameter
from ..qcore.exp import q_exp, q_exp_values
from ..qlattice.lattice import build_lattice
from ..qdynamics.problem import brownian_problem, linear_problem
from ..qdynamics.fokker_planck import (fp_stationary, fp_evolve,
                                       stationary_residual,
                                       stochastic_quantization, positive_extent)
from ..qschrodinger.spectral import (solve_stationary, evolve_spectral,
                                     probability_density)
from ..qschrodinger.free import domain_clipped_lattice, plane_wave_pair

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2
DEFAULT_EXTENT = 8.

@dataclass
class CommandResult:
    """
    Output of one command before it is written

    Parameters:
    table (pd.DataFrame or None): rows for CSV output
    summary (dict or None): JSON object; built from the table when None
    status (int): exit status
    """
    table: pd.DataFrame = None
    summary: dict = None
    status: int = EXIT_OK

def main(argv = None):
    """
    Console entry point

    Parameters:
    argv (list of str or None): arguments without the program name. None
        reads sys.argv

    Returns:
    status (int): 0 on success, 2 on a failed verification, 1 on errors
    """
    logging.basicConfig(format = '%(levelname)s %(name)s: %(message)s',
                        stream = sys.stderr)
    try:
        config = parse_config(argv)
    except UsageError as error:
        logger.error('usage: %s', error)
        return EXIT_ERROR
    if config.verbose:
        logging.getLogger('qdeform').setLevel(logging.INFO)
    return run(config)

def run(config):
    """
    Runs one configuration, or every configuration of a q sweep, and writes
    its artifact. Warnings raised by the library are recorded: they go into
    the 'warnings' list of JSON output and to the log for CSV output

    Parameters:
    config (RunConfig): resolved configuration

    Returns:
    status (int): exit status
    """
    if config.sweep is not None:
        return run_sweep(config)
    logger.info('running %s at q = %r', config.command, config.q)
    try:
        with warnings.catch_warnings(record = True) as caught:
            warnings.simplefilter('always')
            result = COMMANDS[config.command](config)
        messages = _unique_messages(caught)
        if config.command == 'verify':
            result.summary['flags']['via_reciprocal'] = sum(
                issubclass(w.category, ReciprocalPathWarning) for w in caught)
        _emit(result, messages, config)
    except (QDeformError, ValueError, OSError) as error:
        logger.error('%s failed: %s', config.command, error)
        return EXIT_ERROR
    return result.status

def run_sweep(config):
    """
    Runs one process per swept q. Every run writes its own file, named by
    inserting _q<value> before the extension of config.output

    Parameters:
    config (RunConfig): configuration with a sweep

    Returns:
    status (int): the largest exit status of the runs
    """
    if not config.output:
        logger.error('usage: %s', UsageError('a sweep writes one file per q '
                                             'and needs output', 'sweep'))
        return EXIT_ERROR
    runs = [config.with_q(q, suffixed_path(config.output, f'_q{q:g}'))
            for q in sweep_values(config.sweep)]
    with ProcessPoolExecutor() as executor:
        statuses = executor.map(run, runs)
        if config.verbose:
            statuses = tqdm(statuses, total = len(runs), leave = False)
            statuses.set_description('Sweeping q')
        statuses = list(statuses)
    return max(statuses)

################################################################################
############################### Commands #######################################
################################################################################

def run_eval(config):
    q = _deformation(config)
    lattice = _lattice(config, q)
    z = config.k * lattice.points
    evaluations = [q_exp(zi, q, config.tol_rel) for zi in z]
    return CommandResult(make_eval_table(lattice.points, z, evaluations))

def run_verify(config):
    report = run_verification(config)
    table = pd.DataFrame([{'suite': name, **result.to_dict()}
                          for name, result in report.suites.items()],
                         columns = ['suite', 'max_defect', 'tolerance',
                                    'passed', 'samples'])
    status = EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED
    return CommandResult(table, report.to_dict(), status)

def run_fp_stationary(config):
    q = _deformation(config)
    problem = brownian_problem(config.gamma, config.alpha,
                               _lattice(config, q), config.convention)
    F = fp_stationary(problem)
    logger.info('stationary residual (%s): %.3e', config.convention,
                stationary_residual(F, problem))
    _, flags = q_exp_values(-problem.alpha * problem.lattice.points ** 2, q,
                            config.tol_rel)
    return CommandResult(make_fp_stationary_table(F, flags))

def run_fp_evolve(config):
    """
    Relaxation of the stationary density at twice the width parameter under
    the configured problem
    """
    q = _deformation(config)
    lattice = _lattice(config, q)
    problem = brownian_problem(config.gamma, config.alpha, lattice,
                               config.convention)
    F0 = fp_stationary(brownian_problem(config.gamma, 2. * config.alpha,
                                        lattice, config.convention))
    scheme = None if config.scheme == 'auto' else config.scheme
    trajectory = fp_evolve(F0, problem, config.dt, config.steps, scheme,
                           config.verbose)
    logger.info('%s scheme, final mass drift %.3e', trajectory.scheme,
                trajectory.mass_drift[-1])
    return CommandResult(make_fp_evolve_table(trajectory))

def run_schrod_eigen(config):
    spectral = solve_stationary(_mapped_problem(config), config.levels)
    summary = spectrum_summary(spectral)
    summary['q'] = config.q
    return CommandResult(make_spectrum_table(spectral), summary)

def run_schrod_free(config):
    q = _deformation(config)
    lattice = domain_clipped_lattice(config.k, q, config.count,
                                     branch = config.branch)
    state = plane_wave_pair(config.k, lattice)
    return CommandResult(make_plane_wave_table(state,
                                               probability_density(state)))

def run_schrod_evolve(config):
    """
    Equal superposition of the two lowest eigenpairs, evolved spectrally
    """
    spectral = solve_stationary(_mapped_problem(config), max(config.levels, 2))
    ground, excited = spectral.states()[:2]
    psi = ground.combine(excited, 1. / np.sqrt(2.), 1. / np.sqrt(2.))
    times = config.dt * np.arange(config.steps + 1)
    evolved = evolve_spectral(psi, spectral, times, config.hbar)
    return CommandResult(make_norm_trace_table(evolved))

COMMANDS = {
    'eval': run_eval,
    'verify': run_verify,
    'fp-stationary': run_fp_stationary,
    'fp-evolve': run_fp_evolve,
    'schrod-eigen': run_schrod_eigen,
    'schrod-free': run_schrod_free,
    'schrod-evolve': run_schrod_evolve,
}

def lattice_extent(config, q):
    """
    Outermost lattice point of a run. An explicit lambda0 wins. Otherwise
    the Fokker-Planck commands stay where every stationary profile they
    build is positive, and the rest use DEFAULT_EXTENT

    Parameters:
    config (RunConfig): resolved configuration
    q (DeformationParameter): deformation of the run

    Returns:
    lambda0 (float): outermost point
    """
    if config.lambda0 is not None:
        return config.lambda0
    if config.command == 'fp-stationary':
        return positive_extent(config.alpha, q)
    if config.command == 'fp-evolve':
        return positive_extent(2. * config.alpha, q)
    return DEFAULT_EXTENT

################################################################################
######################### Utility functions ####################################
################################################################################

def _deformation(config):
    return DeformationParameter(config.q, config.epsilon_one)

def _lattice(config, q):
    return build_lattice(lattice_extent(config, q), q, config.count,
                         config.branch)

def _mapped_problem(config):
    q = _deformation(config)
    fp = linear_problem(config.gamma, config.alpha, _lattice(config, q))
    return stochastic_quantization(fp, config.hbar, config.mass)

def _unique_messages(caught):
    messages = []
    for record in caught:
        message = str(record.message)
        if message not in messages:
            messages.append(message)
    return messages

def _emit(result, messages, config):
    if config.format == 'json':
        summary = result.summary
        if summary is None:
            summary = table_summary(result.table)
        summary = dict(summary, warnings = messages)
        write_json(summary, config.output)
        return
    for message in messages:
        logger.warning(message)
    write_csv(result.table, config.output)
