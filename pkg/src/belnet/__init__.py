"""belnet: a tiered-access knowledge-portal service with versioned content,
LaTeX-subset formula markup, and a lab-practice toolkit for radiation spectra."""

__version__ = "0.1.0"
