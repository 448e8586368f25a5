import json
import sys
import numpy as np
import pandas as pd

SCHEMA_VERSION = 1
FLOAT_FORMAT = '%.17g'

def make_eval_table(x, z, evaluations):
    """
    Rows of E_q(z) evaluations

    Parameters:
    x (np.array): lattice points
    z (np.array): series arguments
    evaluations (list of SeriesEvaluation): results, one per point

    Returns:
    table (pd.DataFrame): columns x, z, E_q_re, E_q_im, terms_used,
        truncation_bound, E_q_domain_flag
    """
    values = np.array([e.value for e in evaluations], dtype = complex)
    return pd.DataFrame({
        'x': np.asarray(x, dtype = float),
        'z': np.asarray(z, dtype = float),
        'E_q_re': values.real,
        'E_q_im': values.imag,
        'terms_used': [e.terms_used for e in evaluations],
        'truncation_bound': [e.truncation_bound for e in evaluations],
        'E_q_domain_flag': [e.domain_flag.value for e in evaluations]})

def make_fp_stationary_table(F, flags):
    """
    Parameters:
    F (LatticeFunction): stationary density
    flags (np.array): domain flag of each E_q evaluation

    Returns:
    table (pd.DataFrame): columns x, f_st, E_q_domain_flag
    """
    return pd.DataFrame({'x': F.lattice.points, 'f_st': F.samples.real,
                         'E_q_domain_flag': list(flags)})

def make_fp_evolve_table(trajectory):
    """
    Long-format rows of an FPTrajectory, one row per (step, point)

    Parameters:
    trajectory (FPTrajectory): time-stepped densities

    Returns:
    table (pd.DataFrame): columns step, t, x, f, mass_drift
    """
    points = trajectory.states[0].lattice.points
    frames = []
    for step, (t, state, drift) in enumerate(zip(trajectory.times,
                                                 trajectory.states,
                                                 trajectory.mass_drift)):
        frames.append(pd.DataFrame({'step': step, 't': t, 'x': points,
                                    'f': state.samples.real,
                                    'mass_drift': drift}))
    return pd.concat(frames, ignore_index = True)

def make_spectrum_table(spectral):
    """
    Parameters:
    spectral (SpectralDecomposition): paired eigenpairs

    Returns:
    table (pd.DataFrame): columns level, E_re, E_im, E_qinv_re, E_qinv_im,
        residual, index_q, index_qinv
    """
    return pd.DataFrame({
        'level': np.arange(spectral.levels),
        'E_re': spectral.eigenvalues_q.real,
        'E_im': spectral.eigenvalues_q.imag,
        'E_qinv_re': spectral.eigenvalues_qinv.real,
        'E_qinv_im': spectral.eigenvalues_qinv.imag,
        'residual': spectral.residuals,
        'index_q': spectral.pairing[:, 0],
        'index_qinv': spectral.pairing[:, 1]})

def make_plane_wave_table(state, density):
    """
    Parameters:
    state (QPairedState): plane-wave pair
    density (LatticeFunction): conj(phi_(1/q)) phi_q

    Returns:
    table (pd.DataFrame): columns x, phi_q_re, phi_q_im, phi_qinv_re,
        phi_qinv_im, rho_re, rho_im
    """
    return pd.DataFrame({
        'x': state.lattice.points,
        'phi_q_re': state.psi_q.samples.real,
        'phi_q_im': state.psi_q.samples.imag,
        'phi_qinv_re': state.psi_qinv.samples.real,
        'phi_qinv_im': state.psi_qinv.samples.imag,
        'rho_re': density.samples.real,
        'rho_im': density.samples.imag})

def make_norm_trace_table(evolved):
    """
    Parameters:
    evolved (EvolvedState): spectral evolution

    Returns:
    table (pd.DataFrame): columns t, norm_re, norm_im
    """
    return pd.DataFrame({'t': evolved.times, 'norm_re': evolved.norm_trace.real,
                         'norm_im': evolved.norm_trace.imag})

def spectrum_summary(spectral):
    """
    JSON-ready summary of a SpectralDecomposition
    """
    return {'levels': spectral.levels,
            'eigenvalues_q': list(spectral.eigenvalues_q),
            'eigenvalues_qinv': list(spectral.eigenvalues_qinv),
            'residuals': list(spectral.residuals),
            'pairing': spectral.pairing.tolist(),
            'gram_condition': spectral.gram_condition,
            'dropped': spectral.dropped,
            'partner': spectral.partner}

def table_summary(table):
    return {'schema_version': SCHEMA_VERSION,
            'columns': list(table.columns),
            'rows': table.to_dict(orient = 'records')}

def format_csv(table):
    """
    CSV text: header line, '# schema-version 1', then the rows with
    round-trip float precision
    """
    header = ','.join(table.columns) + '\n'
    version = f'# schema-version {SCHEMA_VERSION}\n'
    body = table.to_csv(index = False, header = False,
                        float_format = FLOAT_FORMAT, lineterminator = '\n')
    return header + version + body

def format_json(summary):
    return json.dumps(jsonable(summary), sort_keys = True, indent = 2) + '\n'

def write_csv(table, path = ''):
    """
    Writes a table as CSV to path, or to stdout when path is empty
    """
    _write(format_csv(table), path)

def write_json(summary, path = ''):
    """
    Writes a summary as one JSON object to path, or to stdout when path is
    empty. Complex numbers become {"re": ..., "im": ...}
    """
    _write(format_json(summary), path)

def jsonable(value):
    """
    Converts numpy scalars and arrays, complex numbers and non-finite floats
    to plain JSON values
    """
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': jsonable(float(value.real)),
                'im': jsonable(float(value.imag))}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not np.isfinite(value):
            return str(value)
        return value
    return value

################################################################################
######################### Utility functions ####################################
################################################################################

def _write(text, path):
    if not path:
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding = 'utf-8', newline = '\n') as f:
        f.write(text)
