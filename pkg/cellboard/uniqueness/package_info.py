# SPDX-License-Identifier: MIT

MAJOR = 0
MINOR = 3
PATCH = 0
PRE_RELEASE = ''

# Use the following formatting: (major, minor, patch, pre-release)
VERSION = (MAJOR, MINOR, PATCH, PRE_RELEASE)

__shortversion__ = '.'.join(map(str, VERSION[:3]))
__version__ = '.'.join(map(str, VERSION[:3])) + ''.join(VERSION[3:])

__package_name__ = 'cellboard-uniqueness'
__contact_names__ = 'Cell-board uniqueness maintainers'
__contact_emails__ = ''
__homepage__ = ''
__repository_url__ = ''
__download_url__ = ''
__description__ = "Rigorous Gibbs-measure uniqueness regions of the cell-board Ising model"
__license__ = 'MIT'
__keywords__ = 'ising, gibbs measure, dobrushin, dobrushin-shlosman, disagreement percolation, phase diagram'
