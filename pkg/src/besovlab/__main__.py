# src/besovlab/__main__.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Entry point for `python -m besovlab`.

from .cli import main

if __name__ == '__main__':
    main()
