"""Two registers say something no one-register formula can.

The formula remembers the start in x1, later remembers a second point in x2,
and then asks for a point above the start but below the second point.  It
nests two untils, so a single round cannot see it even with two registers.

Run: python3 demos/register_separation.py
"""

from tempo_ef import ConstantSet, FamilyParams, TptlGameConfig, eval_tptl, family, parse_tptl, solve_tg

C = ConstantSet([-1, 0, 1])
phi = parse_tptl("x1.F(x1>0 & x2.F(x1>0 & x2<0))")
for k in (1, 2):
    fam = family("prop5.10", FamilyParams(r=2, k=k, constants=C))
    print(f"k={k}: w0 = {fam.w0}")
    print(f"      w1 = {fam.w1}")
    print(f"  two-register formula: w0 {eval_tptl(fam.w0, 0, None, phi)}, w1 {eval_tptl(fam.w1, 0, None, phi)}")
    for n in (1, 2):
        win = solve_tg(TptlGameConfig(fam.w0, fam.w1, C, n, k, fam.claim.horizon)).winner
        print(f"  TG_{k} with {n} register(s): {win.value} wins")
