# monotone-pss documentation build configuration file.
import os
import sys

sys.path.insert(0, os.path.abspath(".."))

import monotone_pss

# -- General configuration -----------------------------------------------------

extensions = ["sphinx.ext.autodoc", "sphinx.ext.viewcode", "sphinx.ext.mathjax"]
templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "monotone-pss"
copyright = "2026, The monotone-pss developers"

version = monotone_pss.__version__
release = monotone_pss.__version__

exclude_patterns = ["_build"]
pygments_style = "sphinx"
autodoc_member_order = "bysource"

# -- Options for HTML output ---------------------------------------------------

html_theme = "default"
html_static_path = ["_static"]
htmlhelp_basename = "monotone-pssdoc"

# -- Options for manual page output --------------------------------------------

man_pages = [("index", "monotone-pss", "monotone-pss Documentation", ["The monotone-pss developers"], 1)]
