# Built-in benchmark problems
