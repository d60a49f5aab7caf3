"""Physical constants shared across the package (single source of truth)."""

SPEED_OF_LIGHT = 299_792_458.0      # m/s (exact)
STANDARD_GRAVITY = 9.80665          # m/s^2 (standard)
JET_FUEL_SPECIFIC_ENERGY = 43.1e6   # J/kg, kerosene-type jet fuel
