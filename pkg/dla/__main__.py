from dla.cli import main

main()
