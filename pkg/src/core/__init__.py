# Core package: grid, schemas, outer iteration, refinement studies
