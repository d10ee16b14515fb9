from bipartkit.cli import main

main()
