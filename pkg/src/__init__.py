"""Tree Spectra Toolkit - Main Package"""

__version__ = "0.1.0"
__author__ = "YUN DA"
