//! Residual formulas behind every check name.

pub struct CheckInfo {
    pub name: &'static str,
    /// Family label carried into reports.
    pub tag: &'static str,
    pub formula: &'static str,
}

const fn info(name: &'static str, tag: &'static str, formula: &'static str) -> CheckInfo {
    CheckInfo { name, tag, formula }
}

pub const CHECKS: &[CheckInfo] = &[
    info("anchor-identity", "algebroid-axiom", "ρ^j_a ∂_j ρ^i_b − ρ^j_b ∂_j ρ^i_a − C^c_{ab} ρ^i_c,  a < b"),
    info("jacobi-identity", "algebroid-axiom", "C^e_{ad} C^d_{bc} + ρ_a(C^e_{bc}) + cyclic(a,b,c),  a < b < c"),
    info("closedness", "base-structure", "∂_i ω_{jk} + ∂_j ω_{ki} + ∂_k ω_{ij},  i < j < k"),
    info("poisson", "base-structure", "π^{il} ∂_l π^{jk} + cyclic(i,j,k),  i < j < k"),
    info("presymplectic-anchored", "momentum-condition", "(ᴬ∇^bas_{e_a} ω)_{ij}"),
    info("momentum-symplectic", "momentum-condition", "∇_i μ_a + ρ^j_a ω_{ji}"),
    info("bracket-compatible-symplectic", "momentum-condition", "ᴬdμ(e_a, e_b) − ω(ρ_a, ρ_b),  a < b"),
    info("poisson-anchored", "momentum-condition", "(ᴬ∇^bas_{e_a} π)^{ij}"),
    info("momentum-poisson", "momentum-condition", "ρ^i_a − π^{ij}∇_j μ_a"),
    info("bracket-compatible-poisson", "momentum-condition", "ᴬdμ(e_a, e_b) + π^{ij} ∇_i μ_a ∇_j μ_b,  a < b"),
    info("basic-curvature-sharp", "basic-curvature", "π^{ij} S^c_{jab} μ_c,  a < b"),
    info("basic-curvature-pairing", "basic-curvature", "S^c_{jab} μ_c,  a < b"),
    info(
        "basic-curvature-forms",
        "basic-curvature",
        "expanded S^c_{iab} − (∇_i T^c_{ab} + ρ^j_b R^c_{a,ij} − ρ^j_a R^c_{b,ij})",
    ),
    info(
        "anchor-identity-substituted",
        "identity-chain",
        "π^{ij}(−π^{kl} ∂_k N_{ja} N_{lb} − π^{kl} N_{ka} ∂_l N_{jb} − ∂_j π^{kl} N_{ka} N_{lb} − C^c_{ab} N_{jc}),  N_{ja} = ∇_j μ_a",
    ),
    info(
        "anchor-identity-covariant",
        "identity-chain",
        "π^{ij}(π^{kl} D_k N_{ja} N_{lb} + π^{kl} N_{ka} D_l N_{jb} + ∂_j π^{kl} N_{ka} N_{lb} − T^c_{ab} N_{jc}),  D_k N_{ja} = ∂_k N_{ja} − ω^b_{ak} N_{jb}",
    ),
    info("bracket-compatible-covariant", "identity-chain", "π^{kl} N_{ka} N_{lb} − T^c_{ab} μ_c"),
    info("bracket-compatible-derivative", "identity-chain", "Q_{jab} − S^c_{jab} μ_c,  Q = bracket of the covariant anchor identity"),
    info("bracket-compatible-derivative-sharp", "identity-chain", "π^{ij}(Q_{jab} − S^c_{jab} μ_c)"),
    info("covariant-koszul-identity", "identity-chain", "Q_{jab} (expected once S^c_{jab} μ_c = 0)"),
    info("koszul-morphism", "identity-chain", "[N_a, N_b]_π + C^c_{ab} N_c (expected once S^c_{jab} μ_c = 0)"),
    info("flux-closedness", "courant", "dH"),
    info("courant-jacobi", "courant", "[e1,[e2,e3]] − [[e1,e2],e3] − [e2,[e1,e3]]"),
    info("courant-anchor", "courant", "ρ([e1,e2]) − [ρ(e1), ρ(e2)]"),
    info("courant-leibniz", "courant", "[e1, f e2] − f[e1,e2] − ρ(e1)(f) e2"),
    info("courant-symmetric-part", "courant", "[e1,e1] − ½ d⟨e1,e1⟩"),
    info("courant-invariance", "courant", "ρ(e1)⟨e2,e3⟩ − ⟨[e1,e2],e3⟩ − ⟨e2,[e1,e3]⟩"),
    info("graph-omega-isotropy", "dirac", "⟨F_a, F_b⟩ on the frame ∂_i + ω♭∂_i"),
    info("graph-omega-involutivity", "dirac", "least-squares distance of [F_a, F_b] from the frame span"),
    info("graph-pi-isotropy", "dirac", "⟨F_a, F_b⟩ on the frame −π♯dx^k + dx^k"),
    info("graph-pi-involutivity", "dirac", "least-squares distance of [F_a, F_b] from the frame span"),
    info("anchor-comomentum-bracket", "morphism", "(ρ + μ*)([e_a,e_b]) − [(ρ_a, μ_a), (ρ_b, μ_b)] in TM ⊕ ℝ"),
    info("anchor-comomentum-anchor", "morphism", "ρ_a − ρ_a"),
    info("presymplectic-graph-bracket", "morphism", "φ([e_a,e_b]) − [φ e_a, φ e_b] (Dorfman),  φ = ρ − (∇μ)*"),
    info("presymplectic-graph-anchor", "morphism", "anchor of φ e_a − ρ_a"),
    info("presymplectic-graph-membership", "morphism", "−∇μ_a − ω♭(ρ_a)"),
    info("poisson-graph-bracket", "morphism", "φ([e_a,e_b]) − [φ e_a, φ e_b] (Dorfman),  φ = ρ − (∇μ)*"),
    info("poisson-graph-anchor", "morphism", "anchor of φ e_a − ρ_a"),
    info("poisson-graph-membership", "morphism", "ρ_a − π♯(∇μ_a)"),
    info("covector-comomentum-bracket", "morphism", "φ([e_a,e_b]) − [φ e_a, φ e_b] in T*M ⊕ ℝ,  φ = −(∇μ)* + μ*"),
    info("covector-comomentum-anchor", "morphism", "π♯(∇μ_a) − ρ_a"),
    info("covector-bracket", "morphism", "−C^c_{ab} ∇μ_c − [∇μ_a, ∇μ_b]_π"),
    info("covector-anchor", "morphism", "π♯(∇μ_a) − ρ_a"),
    info("anchor-map-bracket", "morphism", "ρ([e_a,e_b]) − [ρ_a, ρ_b]"),
    info("anchor-map-anchor", "morphism", "ρ_a − ρ_a"),
    info("anchor-map-dual-poisson", "poisson-map", "π_TM*(φ(m)) − φ_* π_A*,  φ(x, q) = (x, ρ^i_a q_i) on the dual bundles"),
    info("dual-anchor-poisson-map", "poisson-map", "π_A*(φ(m)) − φ_* π_T*M,  φ(x, q) = (x, ρ^i_a q_i)"),
    info("dual-anchor-dirac-morphism", "dirac-morphism", "least-squares residual of the graph relation under φ(x, q) = (x, ρ^i_a q_i)"),
    info("momentum-poisson-map", "poisson-map", "π_A*(φ(m)) − φ_* π_TM,  φ(x, v) = (x, −∇_i μ_a v^i)"),
    info("momentum-dirac-morphism", "dirac-morphism", "least-squares residual of the graph relation under φ(x, v) = (x, −∇_i μ_a v^i)"),
    info("master-equation-dual", "graded", "{Θ_N, Θ_N},  Θ_N = ρ^i_a ξ_i q^a + ½ C^c_{ab} q^a q^b p_c"),
    info("algebroid-field-square", "graded", "Q²(z),  Q = ρ^i_a q^a ∂_{x^i} − ½ C^c_{ab} q^a q^b ∂_{q^c}"),
    info("graded-dual-reproduction", "graded", "−{{a p + f s, Θ_N}, b p + g s} − ([a,b] p + (ρ(a)g − ρ(b)f) s)"),
    info("graded-jacobi", "graded", "{F,{G,H}} − {{F,G},H} − (−1)^{|F||G|} {G,{F,H}}"),
    info("graded-antisymmetry", "graded", "{F,G} + (−1)^{|F||G|} {G,F}"),
    info(
        "master-equation-tangent",
        "graded",
        "{Θ_M, Θ_M},  Θ_M = π^{ij} ξ_i y_j − ½ ∂_i π^{jk} y_j y_k η^i + ½ π^{jk} y_j y_k s",
    ),
    info("poisson-field-square", "graded", "Q²(z),  Q = π^{ij} y_j ∂_{x^i} + ½ ∂_k π^{ij} y_i y_j ∂_{y_k} + ½ π^{ij} y_i y_j ∂_t"),
    info(
        "graded-tangent-reproduction",
        "graded",
        "{{α η + f s, Θ_M}, β η + g s} − ([α,β]_π η + (π♯β(f) − π♯α(g) − π(α,β)) s)",
    ),
    info("graded-momentum-map", "graded", "Φ({F,G}_N) − {Φ F, Φ G}_M,  Φ: p_a ↦ −∇_i μ_a η^i + μ_a s"),
];

pub fn lookup(name: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.name == name)
}

pub fn tag(name: &str) -> &'static str {
    lookup(name).map(|c| c.tag).unwrap_or("other")
}
