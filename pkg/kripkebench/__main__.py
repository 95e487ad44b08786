from kripkebench.cli import main

main()
