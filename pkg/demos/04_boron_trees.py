#!/usr/bin/env python3
"""Boron trees: measures defined purely through finite combinatorics.

Trees whose internal vertices all have valence three, with leaves carrying
the geodesics-meet relation.  Two measures exist; both are verified against
the amalgamation identity, and their class values generate Z[x]/(2x^2 + x).
"""

from oligocat.fraisse import (BoronTree, all_structures, boron_mu, boron_nu,
                              boron_theta_witness, embeddings,
                              enumerate_amalgamations, verify_measure)

print("== the small boron trees ==")
for n in range(7):
    reps = all_structures("boron", n)
    print(f"  {n} leaves: {len(reps)} shape(s)")

print()
print("== parsing a shape ==")
t5 = BoronTree.from_newick("((,),,(,))")
print("  ((,),,(,)) has", t5.size, "leaves and",
      len(t5.edges), "edges")

print()
print("== the four amalgamations of two 3-leaf trees over an edge ==")
t2 = all_structures("boron", 2)[0]
t3 = all_structures("boron", 3)[0]
i = embeddings(t2, t3)[0]
for am in enumerate_amalgamations(i, i):
    print(f"  amalgam on {am.structure.size} leaves")

print()
print("== both measures pass the amalgamation identity (<= 6 leaves) ==")
for make in (boron_mu, boron_nu):
    rep = verify_measure("boron", make(), 6)
    print(f"  {rep.name}: {'pass' if rep.ok else 'FAIL'} "
          f"({rep.counts['amalgamation-instances']} amalgamation instances)")

print()
print("== the quadratic relation ==")
rep = boron_theta_witness()
print("  class values match 3c+3, 3c+2, 3c+1, c, c, -1-c and c(2c+1) = 0:",
      "pass" if rep.ok else rep.failures)
