from .runner import console_main

console_main()
