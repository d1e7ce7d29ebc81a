"""PC2 workbench: point configurations that defeat packings of unit disks.

Subpackages cover the geometry core, the hard-configuration builder, the
numerical lemma verifiers, the interstitium lower-bound lab, the cover
solver, a CLI, and an HTTP game service.
"""

__version__ = "0.1.0"
