"""Printed Kreweras objects shared by several test modules."""
from walkprove.exactarith import MultiPoly

GENS = ("T", "t", "x")

P_TEXT = """(16*x^3*t^4+108*t^4-72*x*t^3+8*x^2*t^2-2*t+x)
 +(2*t-x)*(48*t^4*x^2-72*t^3+16*t^2*x+1)*T
 +t^2*(48*x^4*t^4+192*x*t^4-264*x^2*t^3+64*x^3*t^2+32*t^2-32*x*t+9*x^2)*T^2
 +32*t^4*(2*t-x)*(3*t^2*x^3+2*t^2-2*t*x+x^2)*T^3
 +8*x^2*t^6*(7*x^2-24*t*x+6*t^2*x^3+24*t^2)*T^4
 +48*x^4*t^8*(2*t-x)*T^5+16*x^6*t^10*T^6"""

H_TEXT = ("U^6*x^3+3*U^4*(U+1)^2*x^2+3*U^2*(U+1)^4*x+1+6*U+15*U^2+24*U^3+27*U^4"
          "+18*U^5+5*U^6")
R1_TEXT = ("U*(1+U)*(1+2*U+U^2+U^2*x)^2", "h")
R2_TEXT = ("(U^4*x^2+2*U^2*(U+1)^2*x+1+4*U+6*U^2+2*U^3-U^4)*h",
           "(1+U)^2*(1+2*U+U^2+U^2*x)^4")

OCTIC_TEXT = (
    "-1+48*t-576*t^2-256*t^3+(1-60*t+912*t^2-512*t^3)*T+(10*t-312*t^2+624*t^3-512*t^4)*T^2"
    "+(45*t^2-504*t^3-576*t^4)*T^3+(117*t^3-252*t^4-288*t^5)*T^4+189*t^4*T^5+189*t^5*T^6"
    "+108*t^6*T^7+27*t^7*T^8")

EXCURSION_TEXT = "64*t^6*T^3+16*t^3*T^2+T-72*t^3*T+54*t^3-1"


def kreweras_P() -> MultiPoly:
    return MultiPoly.parse(P_TEXT, GENS)


def parameterization():
    g = ("U", "x", "h")
    h = MultiPoly.parse(H_TEXT, ("U", "x"))
    R1 = tuple(MultiPoly.parse(s, g) for s in R1_TEXT)
    R2 = tuple(MultiPoly.parse(s, g) for s in R2_TEXT)
    return R1, R2, h
