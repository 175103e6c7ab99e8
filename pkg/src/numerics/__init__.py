# Numerical kernels: stencils and the fast compact Poisson solver
