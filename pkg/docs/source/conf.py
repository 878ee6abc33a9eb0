# -*- coding: utf-8 -*-
#
# freeconv documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__),
                                                '..', '..')))

autoclass_content = "both"

import freeconv

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode',
              'sphinx.ext.intersphinx']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'freeconv'
copyright = '2024, freeconv contributors'

version = '.'.join(freeconv.__version__.split('.')[:-1])
release = freeconv.__version__

exclude_patterns = []
pygments_style = 'sphinx'

html_theme = 'default'
html_static_path = ['_static']
htmlhelp_basename = 'freeconvdoc'

latex_elements = {
}
latex_documents = [
  ('index', 'freeconv.tex', 'freeconv Documentation',
   'freeconv contributors', 'manual'),
]

man_pages = [
    ('index', 'freeconv', 'freeconv Documentation',
     ['freeconv contributors'], 1)
]

texinfo_documents = [
  ('index', 'freeconv', 'freeconv Documentation',
   'freeconv contributors', 'freeconv', 'Numerical free convolution.',
   'Miscellaneous'),
]
