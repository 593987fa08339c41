# Enums package
# This package contains all enumeration definitions used across the library
