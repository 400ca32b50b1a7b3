# -*- coding: utf-8 -*-
#
# projens documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing
# dir.

import os
import re
import sys

projensfile = os.path.join(
    os.path.dirname(__file__), '..', 'projens', '__init__.py')

with open(projensfile) as stream:
    VERSION = re.compile(
        r".*__version__ = '(.*?)'", re.S
    ).match(stream.read()).group(1)

# autodoc imports the package from the sources
sys.path.insert(0, os.path.abspath('..'))

# -- General configuration ----------------------------------------------------

extensions = [
    'sphinx.ext.autodoc', 'sphinx.ext.coverage', 'sphinx.ext.viewcode'
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'projens'
copyright = u'2026, the projens contributors'

version = VERSION
release = VERSION

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output --------------------------------------------------

import cloud_sptheme as csp

html_theme = "cloud"
html_theme_options = {
    "sidebarwidth": "200px",
    "max_width": "900px",
    "compact_width": "800px",
    "minimal_width": "700px",
    "highlightcolor": "#79db32",
    "linkcolor": "#00009d",
    "codetrimcolor": "#79db32",
}
html_theme_path = [csp.get_theme_dir()]

html_sidebars = {
    '**': [
        'localtoc.html',
        'relations.html',
        'sourcelink.html',
        'searchbox.html',
    ]
}

htmlhelp_basename = 'projens'

# -- Options for manual page output -------------------------------------------

man_pages = [
    (
        'usage', 'projens', u'projens command line',
        [u'The projens contributors'], 1
    )
]
