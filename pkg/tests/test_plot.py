import matplotlib
matplotlib.use('Agg')
import numpy as np
from qdeform.plot import plot_lattice_function, plot_norm_trace, plot_spectrum
from qdeform.util import save_fig
from qdeform.qlattice.lattice import build_lattice, sample
from qdeform.qdynamics.problem import linear_problem
from qdeform.qdynamics.fokker_planck import stochastic_quantization
from qdeform.qschrodinger.spectral import evolve_spectral, solve_stationary

def test_plot_lattice_function(tmp_path):
    lattice = build_lattice(1., 0.5, 8)
    F = sample(lattice, lambda x: np.exp(1j * x))
    fig, ax = plot_lattice_function(F, 'e^(ix)', reference = np.cos)
    assert ax.get_xscale() == 'log'
    assert len(ax.lines) == 3
    path = save_fig(fig, 'lattice', str(tmp_path))
    assert (tmp_path / 'lattice.png').exists()
    assert path.endswith('lattice.png')

def test_plot_spectrum_and_norm_trace(tmp_path):
    lattice = build_lattice(2., 0.8, 12)
    problem = stochastic_quantization(linear_problem(1., 1., lattice))
    spectral = solve_stationary(problem, 2)
    fig, ax = plot_spectrum(spectral, reference = [0.5, 1.5])
    assert len(ax.lines) == 3
    save_fig(fig, 'spectrum', str(tmp_path), 'pdf')
    assert (tmp_path / 'spectrum.pdf').exists()
    evolved = evolve_spectral(spectral.states()[0], spectral,
                              np.linspace(0., 1., 5))
    fig, axs = plot_norm_trace(evolved)
    assert len(axs) == 2
    assert save_fig(None, 'none', str(tmp_path)) is None
