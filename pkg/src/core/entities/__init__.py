# Entities package
# This package contains all core entity definitions: Musielak functions, grid functions, psi weights, problems and reports
