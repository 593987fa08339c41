# Infrastructure package
# This package contains configuration, logging, quadrature helpers and CSV output
