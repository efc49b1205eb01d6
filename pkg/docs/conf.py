# -*- coding: utf-8 -*-
#
# This file is execfile()d with the current directory set to its
# containing dir.
#
# All configuration values have a default; values that are commented out
# serve to show the default.

import sys
import os

# The package is imported from the repository root, wherever sphinx-build is started from.
project_root = os.path.abspath(os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))
sys.path.insert(0, project_root)

import latentlift  # noqa: E402

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.todo',
    'sphinx.ext.viewcode',
]

templates_path = ['.templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'latentlift'
copyright = u'2026, latentlift developers'

version = latentlift.VERSION
release = latentlift.VERSION

exclude_patterns = ['_build']
pygments_style = 'sphinx'

autodoc_member_order = 'bysource'
autodoc_default_options = {
    'special-members': '__init__',
    'members': True,
    'undoc-members': True,
    'show-inheritance': True,
}

# -- Options for HTML output ----------------------------------------------

html_theme = 'default'
html_theme_options = {
    'navigation_depth': 3,
    'collapse_navigation': False,
}
html_domain_indices = True
htmlhelp_basename = 'latentliftdoc'

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'latentlift', u'latentlift Documentation',
     [u'latentlift developers'], 1)
]
