# Application package
# This package contains the numerical modules: Musielak modulars, fractional operators, the K-space checks and the mountain-pass solver
