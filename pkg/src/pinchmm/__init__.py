"""Max-min SNR placement of pinching antennas on a dielectric waveguide.

Modules
-------
model       channel, mean-SNR objective, layouts, CAS baseline
surrogate   tangent quadratic minorizer of the mean SNR
intervals   per-antenna feasible regions
csm, bsm    exact candidate search and bisection for one coordinate
mm          multi-start minorization-maximization driver
oracle      grid, finite-difference and Monte Carlo references
scenario    scenario generation and config files
experiment  parameter sweeps and the timing benchmark
cli         ``pinchmm`` command line
"""

__version__ = "0.1.0"
