"""HTTP front end for covcalc; see :mod:`covcalc.service.app`."""
