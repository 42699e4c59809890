//! Experiment ids and their descriptions.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    ClosedForms,
    BoundsSandwich,
    CommuteIdentity,
    GridResistance,
    ProductTheorem,
    DegseqCover,
    ConductanceSurvey,
    PSimple,
    SchemeSpeedup,
    StConnectDemo,
}

pub struct Description {
    pub summary: &'static str,
    pub result: &'static str,
    pub inputs: &'static str,
    pub acceptance: &'static str,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::ClosedForms,
        Experiment::BoundsSandwich,
        Experiment::CommuteIdentity,
        Experiment::GridResistance,
        Experiment::ProductTheorem,
        Experiment::DegseqCover,
        Experiment::ConductanceSurvey,
        Experiment::PSimple,
        Experiment::SchemeSpeedup,
        Experiment::StConnectDemo,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Experiment::ClosedForms => "closed-forms",
            Experiment::BoundsSandwich => "bounds-sandwich",
            Experiment::CommuteIdentity => "commute-identity",
            Experiment::GridResistance => "grid-resistance",
            Experiment::ProductTheorem => "product-theorem",
            Experiment::DegseqCover => "degseq-cover",
            Experiment::ConductanceSurvey => "conductance-survey",
            Experiment::PSimple => "p-simple",
            Experiment::SchemeSpeedup => "scheme-speedup",
            Experiment::StConnectDemo => "st-connect-demo",
        }
    }

    pub fn describe(self) -> Description {
        match self {
            Experiment::ClosedForms => Description {
                summary: "exact hitting and cover times of K_n, P_n and Z_n against closed forms",
                result: "cover time of K_n is (n-1)h(n-1); worst-start cover time of P_n is 5(n-1)^2/4 \
                         (minus 1/4 for even n) and H(i, j) = j^2 - i^2 from the end at 0; cover time of Z_n \
                         is n(n-1)/2 and H(0, r) = r(n-r)",
                inputs: "--n a..b (default 2..10, at most 13), --seed",
                acceptance: "every exact value within 1e-9 relative of its formula",
            },
            Experiment::BoundsSandwich => Description {
                summary: "exact cover time against the Matthews, MERST and spanning-tree bounds",
                result: "max_A min H h(|A|-1) <= COV <= min(max H h(n-1), MERST bound, 2m(2n-2))",
                inputs: "--family | --graph-file | --product (n <= 13), otherwise named families plus \
                         --trials random graphs (default 30); --seed",
                acceptance: "zero violations at 1e-9 relative slack",
            },
            Experiment::CommuteIdentity => Description {
                summary: "commute times against total conductance times effective resistance",
                result: "H(u, v) + H(v, u) = c(G) R(u, v) on weighted multigraphs",
                inputs: "--family | --graph-file | --product, otherwise --trials random weighted multigraphs \
                         (default 200) with n drawn from --n (default 2..40); --seed",
                acceptance: "largest relative gap at most 1e-6",
            },
            Experiment::GridResistance => Description {
                summary: "largest effective resistance on the k x k grid",
                result: "max R(u, v) on P_k x P_k is below 8 h(k)",
                inputs: "--n a..b grid sides (default 2..20, at most 40), --seed",
                acceptance: "strict inequality for every k",
            },
            Experiment::ProductTheorem => Description {
                summary: "cover-time bounds for Cartesian products against Monte Carlo",
                result: "COV(G x H) >= max((1 + d_G/D_H) COV(H), (1 + d_H/D_G) COV(G)); the upper bound \
                         (1 + D_G/d_H) BCOV(H) + M m_G m_H n_H l^2 / (COV(H) D_G) holds up to an unknown constant K",
                inputs: "--product A,B (default cycle:4,cycle:16 and path:4,cycle:16), --trials (default 200), --seed",
                acceptance: "lower bound at most the Monte Carlo worst-start cover time plus 3 standard errors",
            },
            Experiment::DegseqCover => Description {
                summary: "Monte Carlo cover time of configuration-model graphs against the predicted n ln n law",
                result: "COV ~ (d-1)/(d-2) (theta/d) n ln n with d the effective minimum degree; 2 n ln n for \
                         random 3-regular graphs",
                inputs: "--degseq file|regular:r or --regular r, --n ladder (default 500,1000,2000), \
                         --trials (default 200), --seed",
                acceptance: "mean / prediction in [0.85, 1.15] at every n",
            },
            Experiment::ConductanceSurvey => Description {
                summary: "exact conductance of sampled graphs and the spectral sandwich",
                result: "simple graphs from nice degree sequences have conductance above 1/100 with high \
                         probability; Phi^2/2 <= 1 - lambda_2 <= 2 Phi for the lazy walk",
                inputs: "--family | --graph-file | --product with --scheme and --lazy, otherwise --trials sampled \
                         graphs (default 50) with degrees 3..6 and n from --n (default 20); --seed",
                acceptance: "Phi > 1/100 (report-only below n = 50) and sandwich margins >= -1e-9 wherever Phi \
                             is exact (n <= 22)",
            },
            Experiment::PSimple => Description {
                summary: "probability that a configuration is simple",
                result: "P(simple) -> exp(-nu/2 - nu^2/4) with nu = sum d(d-1) / sum d",
                inputs: "--degseq file|regular:r or --regular r (default r = 3 and 4), --n (default 50,100), \
                         --trials attempts (default 10000), --seed",
                acceptance: "empirical frequency within 0.03 of the prediction",
            },
            Experiment::SchemeSpeedup => Description {
                summary: "cover-time speed-up of the min-deg weighting and its invariants",
                result: "under min-deg weights n <= w(G) <= 2n and every hitting time is at most 6 n^2",
                inputs: "--family | --graph-file | --product (default lollipop:90), --trials (default 1000), --seed",
                acceptance: "speed-up above 1 by 3 standard errors, w(G) in [n, 2n], max hitting <= 6 n^2",
            },
            Experiment::StConnectDemo => Description {
                summary: "random-walk s-t connectivity with an 8nm step budget",
                result: "a walk from s misses a reachable t within 8nm steps with probability at most 1/2",
                inputs: "--path n (default 32) or --family | --graph-file with s = 0 and t = n - 1, \
                         --runs (default 200), --seed",
                acceptance: "success fraction at least 0.45",
            },
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.id() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`; run `walklab list`"))
    }
}
