// Frozen high-precision reference values.
//
// Generated by tools/gen_reference_values.py (mpmath, 50+ digit
// series/closed forms). Regenerate with:
//     python3 tools/gen_reference_values.py
#![allow(dead_code)]

/// E_{0.6,1}(-2)
pub const ML2_06_10_NEG2: f64 = 0.23557103111182497;

/// E^3_{0.7,0.7}(1.5)
pub const ML3_07_07_3_15: f64 = 118.69406886848661;

/// E_{0.6,1.6}(1)
pub const ML2_06_16_1: f64 = 3.2486350026483743;

/// E_{0.6}(1)
pub const ML2_06_10_1: f64 = 4.2486350026483745;

/// E_{0.5}(-8)
pub const ML2_05_10_NEG8: f64 = 0.069985166200880928;

/// E_{0.5}(-30)
pub const ML2_05_10_NEG30: f64 = 0.018795888861416751;

/// E_{0.35}(-12)
pub const ML2_035_10_NEG12: f64 = 0.057840081117690315;

/// E_{0.8,0.5}(-15)
pub const ML2_08_05_NEG15: f64 = -0.015784915551780246;

/// E_{1.3}(-20)
pub const ML2_13_10_NEG20: f64 = -0.011841120110029620;

/// E_{1.3}(10)
pub const ML2_13_10_POS10: f64 = 274.71183265837744;

/// E^2_{0.6,0.8}(-12)
pub const ML3_06_08_2_NEG12: f64 = -0.0017973394995512352;

/// E_{0.4}(-6)
pub const ML2_04_10_NEG6: f64 = 0.10527343265911565;

/// W(-1;-1/2,1/2)
pub const WRIGHT_N1_N05_05: f64 = 0.43939128946772240;

/// e^{-1/4}/sqrt(pi), closed form of the same value
pub const WRIGHT_N1_N05_05_CLOSED: f64 = 0.43939128946772240;

/// W(0.5;1,1)
pub const WRIGHT_05_1_1: f64 = 1.5660829297563505;

/// W(-12;-0.25,0.5)
pub const WRIGHT_N12_N025_05: f64 = 1.0699699824270143e-6;

/// W(-30;-0.25,0.75)
pub const WRIGHT_N30_N025_075: f64 = 1.7496834189307176e-20;

/// W(-6;-0.45,0.61)
pub const WRIGHT_N6_N045_061: f64 = 0.00025780787641239082;

/// W(3;0.5,0.8)
pub const WRIGHT_3_05_08: f64 = 15.933397435692938;

/// W(-9;-0.25,0.25)
pub const WRIGHT_N9_N025_025: f64 = 8.8007585754118650e-5;

/// Gamma(3/2)
pub const GAMMA_15: f64 = 0.88622692545275801;

/// I^0.6 wrt t^2 of f(s)=s^2 at t=1: Gamma(2)/Gamma(2.6)
pub const FRACINT_SQUARE_06: f64 = 0.69948434629382641;

/// Caputo^0.4 wrt t^2 of (t^2)^2 at t=1: Gamma(3)/Gamma(2.6)
pub const CAPUTO_SQUARE_04: f64 = 1.3989686925876528;

/// 1/Gamma(3/2)
pub const RECIP_GAMMA_15: f64 = 1.1283791670955126;

/// 1/Gamma(0.7)
pub const RECIP_GAMMA_07: f64 = 0.77038318386656600;

/// RL IVP (psi=t^2, mu=0.7, lam=0.3, c=1) at t=0.5
pub const RLIVP_SQ_07_03_T05: f64 = 1.3820059462640929;

/// RL IVP (psi=t^2, mu=0.7, lam=0.3, c=1) at t=1.0
pub const RLIVP_SQ_07_03_T10: f64 = 1.2133982787190702;

/// E_{0.6}(1) + E_{0.6,1.6}(1)
pub const CAPUTO_IVP_06_T1: f64 = 7.4972700052967488;

/// two-term Hilfer series at t=0.5
pub const HILFER2_T05: f64 = 0.65272887614076815;

/// two-term Hilfer series at t=1
pub const HILFER2_T10: f64 = 0.45872729456069844;

/// three-term Hilfer, E^(k+1) initial-data terms, t=0.5
pub const HILFER3_PRABHAKAR_T05: f64 = 0.47998682953622660;

/// three-term Hilfer, two-parameter E initial-data terms, t=0.5
pub const HILFER3_PRINTED_T05: f64 = 0.44257337170992131;

/// three-term Hilfer, E^(k+1) initial-data terms, t=1.0
pub const HILFER3_PRABHAKAR_T10: f64 = 0.37326440588149373;

/// three-term Hilfer, two-parameter E initial-data terms, t=1.0
pub const HILFER3_PRINTED_T10: f64 = 0.32679779433907531;

/// G(1,1) for mu=0.5, kappa=1: W(-1;-0.25,0.25)/2
pub const DIFFUSION_GREEN_05: f64 = 0.10624259021477466;
