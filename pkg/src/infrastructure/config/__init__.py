# Configuration package
# This package contains the environment-driven process settings
