if __name__ == "__main__":
    from beamplan.cli import setup_cli

    setup_cli()
