"""Allow running bundlebench as: python -m bundlebench"""

from bundlebench.cli import main

main()
