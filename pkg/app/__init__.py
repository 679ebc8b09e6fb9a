# Machine B4: Mealy machines, the group they generate, and its orbits
