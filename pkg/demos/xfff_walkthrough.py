"""Walk through the x1.FFF(x1=0) pair: TPTL sees the difference, MTL games do not.

Run: python3 demos/xfff_walkthrough.py
"""

from tempo_ef import ConstantSet, FamilyParams, MtlGameConfig, eval_tptl, family, parse_tptl, solve_mg
from tempo_ef.corpus import ShiftedRunStrategy
from tempo_ef.games import MtlGamePosition, verify_duplicator_strategy

C = ConstantSet([-1, 0, 1])
fam = family("prop4.2-xfff", FamilyParams(r=2, s=4, constants=C))
phi = parse_tptl("x1.FFF(x1=0)")

print("w0 =", fam.w0)
print("w1 =", fam.w1)
print(f"{phi} on w0: {eval_tptl(fam.w0, 0, None, phi)}")
print(f"{phi} on w1: {eval_tptl(fam.w1, 0, None, phi)}")
print()
print("The third future point of w0 returns to the starting value; on w1 it never does.")
print("MTL measures each until target from the point where that until is evaluated,")
print("and with constants inside (-r, r) every jump of size r or more looks alike.")
print("The game confirms it round by round:")
for k in (1, 2, 3):
    tree = solve_mg(MtlGameConfig(fam.w0, fam.w1, C, k, 12))
    print(f"  MG_{k}: {tree.winner.value} wins")
print()
cfg = MtlGameConfig(fam.w0, fam.w1, C, 2, 12)
ok = verify_duplicator_strategy(cfg, MtlGamePosition(), ShiftedRunStrategy())
print(f"Duplicator's shifted-run strategy survives every Spoiler line at k=2: {ok}")
