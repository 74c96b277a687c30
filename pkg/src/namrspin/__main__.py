from namrspin.cli import main

main()
