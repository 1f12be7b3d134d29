"""qtilt: exact verification of torsion-pair tilting theory over quiver representations."""

__version__ = "0.1.0"

SCHEMA_VERSION = 1
