"""Hidden symmetry subgroups of Z_{p^n} x| Z_p: group arithmetic, strong bases,
simulated Fourier sampling, and the reduction from Z_N x| Z_p."""

__version__ = "0.1.0"
