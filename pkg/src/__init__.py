# Triharmonic solver package
