import matplotlib.pyplot as plt
import numpy as np

def plot_lattice_function(F, label = '', reference = None, logx = True):
    """
    Plots the real and imaginary parts of a lattice function against the
    lattice points

    Parameters:
    F (LatticeFunction): function to plot
    label (str): legend label
    reference (callable or None): if given, drawn as a dashed curve over the
        lattice range
    logx (bool): If True, uses a logarithmic x axis (positive lattices only)

    Returns:
    fig, ax (pyplot figure and axis): plot of the samples
    """
    fig, ax = plt.subplots(figsize = (4, 3), dpi = 200, layout = 'tight')
    x = F.lattice.points
    order = np.argsort(x)
    color0 = plt.cm.viridis(0.1)
    ax.plot(x[order], F.samples.real[order], 'o', color = color0,
            markersize = 3, label = f'Re {label}'.strip())
    if np.any(F.samples.imag != 0):
        ax.plot(x[order], F.samples.imag[order], 's', color = plt.cm.viridis(0.6),
                markersize = 3, label = f'Im {label}'.strip())
    if reference is not None:
        xsamp = np.linspace(np.min(x), np.max(x), 1000)
        ax.plot(xsamp, np.real(reference(xsamp)), '--k', label = 'reference')
    if logx and np.all(x > 0):
        ax.set_xscale('log')
    ax.set(xlabel = 'x', ylabel = 'f(x)')
    ax.legend(framealpha = 1)
    return fig, ax

def plot_spectrum(spectral, reference = None):
    """
    Plots the retained eigenvalues of a SpectralDecomposition in the complex
    plane, q and 1/q members together

    Parameters:
    spectral (SpectralDecomposition): paired eigenpairs
    reference (np.array or None): undeformed eigenvalues to overlay

    Returns:
    fig, ax (pyplot figure and axis): eigenvalue plot
    """
    fig, ax = plt.subplots(figsize = (4, 3), dpi = 200, layout = 'tight')
    E_q, E_p = spectral.eigenvalues_q, spectral.eigenvalues_qinv
    ax.plot(E_q.real, E_q.imag, 'o', color = plt.cm.viridis(0.1),
            label = r'$H_q$')
    ax.plot(E_p.real, -E_p.imag, 'x', color = 'r',
            label = r'conj $H_{1/q}$')
    if reference is not None:
        reference = np.asarray(reference)
        ax.plot(reference.real, reference.imag, '+k', label = 'undeformed')
    ax.set(xlabel = 'Re E', ylabel = 'Im E')
    ax.legend(framealpha = 1)
    return fig, ax

def plot_norm_trace(evolved):
    """
    Plots the real and imaginary parts of <psi(t), psi(t)>_q

    Parameters:
    evolved (EvolvedState): spectral evolution

    Returns:
    fig, axs (pyplot figure and axes): real part, imaginary part
    """
    fig, axs = plt.subplots(2, 1, sharex = True, figsize = (4, 4), dpi = 200,
                            layout = 'tight')
    axs[0].plot(evolved.times, evolved.norm_trace.real, '-k')
    axs[1].plot(evolved.times, evolved.norm_trace.imag, '-r')
    axs[0].set_ylabel(r'Re $\langle\psi,\psi\rangle_q$')
    axs[1].set_ylabel(r'Im $\langle\psi,\psi\rangle_q$')
    axs[1].set_xlabel('t')
    return fig, axs
