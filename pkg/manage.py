"""
matchstack command line
File: manage.py (project root)

Usage:
    python manage.py gen --n 5 --seed 7
    python manage.py gen --n 3 --exhaustive
    python manage.py analyze histories.jsonl
    python manage.py verify --suite all --max-n 5
    python manage.py export h.json --what tree --format dot
"""
import sys

from matchstack.services.cli import main


if __name__ == '__main__':
    sys.exit(main())
