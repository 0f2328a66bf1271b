# -*- coding: utf-8 -*-
#
# pcadistance documentation build configuration file.

import sys
from importlib import metadata

import sphinx_rtd_theme

# -- General configuration ------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.coverage",
    "sphinx.ext.viewcode",
]

source_suffix = ".rst"
master_doc = "index"

project = "pcadistance"
copyright = "2024, Todd Sifleet"

try:
    # The full version, including alpha/beta/rc tags.
    release = metadata.version("pcadistance")
except metadata.PackageNotFoundError:
    print("Distribution information not found. Run 'poetry install'")
    sys.exit(1)

# The short X.Y version.
version = ".".join(release.split(".")[:2])

exclude_patterns = []
pygments_style = "sphinx"

# -- Options for HTML output ----------------------------------------------

html_theme = "sphinx_rtd_theme"
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
htmlhelp_basename = "pcadistancedoc"

# -- Options for LaTeX, manual page and Texinfo output ---------------------

latex_documents = [
    ("index", "pcadistance.tex", "pcadistance Documentation", "Todd Sifleet", "manual"),
]

man_pages = [("index", "pcadistance", "pcadistance Documentation", ["Todd Sifleet"], 1)]

texinfo_documents = [
    (
        "index",
        "pcadistance",
        "pcadistance Documentation",
        "Todd Sifleet",
        "pcadistance",
        "Missing value prediction by distance to the principal subspace.",
        "Science",
    ),
]
