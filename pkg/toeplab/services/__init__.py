"""Services: quadrature, symbols, Bergman spaces, Toeplitz assembly, oracle and geometry."""
