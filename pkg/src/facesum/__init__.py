"""Face-colouring state sums of link diagrams evaluated in Z[zeta_5]."""
