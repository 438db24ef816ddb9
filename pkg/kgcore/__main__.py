from kgcore.main import main

main()
