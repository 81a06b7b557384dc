from otto_engine.cli.main import run

run()
