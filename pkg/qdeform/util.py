import os
import numpy as np
import matplotlib.pyplot as plt

def fix_path(path):
    """
    Given a path, convert \\ to / and ensure the path ends in / if it is a folder

    Parameters:
    path (str): path to a folder or file

    Returns:
    fixed_path (str): fixed path
    """
    if path == '':
        return path
    fixed_path = path.replace('\\', '/')
    if fixed_path[-1] != '/' and ('.' not in fixed_path.split('/')[-1]):
        fixed_path += '/'
    return fixed_path

def suffixed_path(path, suffix):
    """
    Inserts a suffix between the stem and the extension of a file path.
    'out/run.csv' with suffix '_q0.8' becomes 'out/run_q0.8.csv'

    Parameters:
    path (str): file path
    suffix (str): text to insert

    Returns:
    new_path (str): suffixed path
    """
    path = fix_path(path)
    stem, ext = os.path.splitext(path)
    return stem + suffix + ext

def save_fig(fig, filename, plot_directory, ftype = 'png',
             tight_layout = False):
    """
    Saves a pyplot figure with standard settings and closes it

    Parameters:
    fig (plt.figure): figure to save
    filename (str): name of the file to save, without extension
    plot_directory (str): directory to save the file
    ftype (str): file type to save. Common types are 'png' and 'eps'
    tight_layout (bool): if True, sets the figure layout to 'tight'

    Returns:
    path (str or None): path of the saved file, or None if fig is None
    """
    if fig is None:
        return None
    plot_directory = fix_path(plot_directory)
    os.makedirs(plot_directory, exist_ok = True)
    fig.set_facecolor('white')
    if tight_layout:
        fig.tight_layout()
    path = plot_directory + filename + '.' + ftype
    fig.savefig(path, bbox_inches = 'tight', pad_inches = 0.05)
    plt.close(fig)
    return path

def max_abs(values, mask = None):
    """
    Largest modulus of an array, optionally restricted to a boolean mask.
    Empty selections give 0

    Parameters:
    values (np.array): real or complex values
    mask (np.array or None): boolean selection

    Returns:
    m (float): max |values[mask]|
    """
    values = np.asarray(values)
    if mask is not None:
        values = values[mask]
    if values.size == 0:
        return 0.
    return float(np.max(np.abs(values)))

def relative_defect(a, b, floor = 1e-300):
    """
    |a - b| / max(|a|, |b|), elementwise, with 0 where both vanish

    Parameters:
    a, b (float, complex or np.array): values to compare
    floor (float): smallest scale used in the denominator

    Returns:
    d (float or np.array): relative defect
    """
    a, b = np.asarray(a), np.asarray(b)
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    d = np.abs(a - b) / scale
    d = np.where((np.abs(a) == 0) & (np.abs(b) == 0), 0., d)
    if d.ndim == 0:
        return float(d)
    return d
