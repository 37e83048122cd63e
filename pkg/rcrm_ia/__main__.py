import sys

from rcrm_ia.harness.cli import cli_main

if __name__ == "__main__":
    sys.exit(cli_main())
