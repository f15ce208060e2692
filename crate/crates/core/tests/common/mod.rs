//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! The oracles here are written without calling into the code they check.
#![allow(dead_code)]

use fullstop::classifier::{Classifier, ClassifyError};
use fullstop::sepp::PunctLabel;

/// An unpunctuated transcript, Dutch, under 200 words.
pub const EXAMPLE1_INPUT: &str = "kijk om je heen alles beweegt alles draait zo komen wij ter wereld de zon \
de maan de planeten en de sterren kijken toe en wij staan in het midden \
onze plaats maar Nicolaas Copernicus kwam en stelde dat de Zon in het midden \
staat en dat wij om haar heen draaien net als de andere planeten een Aarde \
die beweegt maar daar zien en voelen we toch niets van dat was 1543";

/// Recorded model output for `EXAMPLE1_INPUT`, marks written as separate tokens.
pub const EXAMPLE1_PREDICTION: &str = "kijk om je heen , alles beweegt , alles draait . zo komen wij ter wereld . de zon , \
de maan , de planeten en de sterren kijken toe en wij staan in het midden . \
onze plaats . maar Nicolaas Copernicus kwam en stelde dat de Zon in het midden \
staat en dat wij om haar heen draaien , net als de andere planeten . een Aarde \
die beweegt , maar daar zien en voelen we toch niets van . dat was 1543";

/// Reference punctuation for `EXAMPLE1_INPUT`.
pub const EXAMPLE1_GOLD: &str = "kijk om je heen . alles beweegt , alles draait . zo komen wij ter wereld . de zon , \
de maan , de planeten en de sterren kijken toe . en wij staan in het midden . \
onze plaats . maar Nicolaas Copernicus kwam en stelde dat de Zon in het midden \
staat , en dat wij om haar heen draaien . net als de andere planeten . een Aarde \
die beweegt ? maar daar zien en voelen we toch niets van ? dat was 1543 .";

/// A second transcript, with split-off apostrophes.
pub const EXAMPLE2_INPUT: &str = "en waar we nu zitten hier dat is bij een fotografische kijker die heel veel gelijkenis \
vertoont met de kijker die werd gebruikt door David Gill zo ' n kijker moet dus in \
staat zijn om foto ' s te nemen maar als je foto ' s neemt met die kijker moet je \
natuurlijk ook een oogje houden op het stukje hemel waar hij op gericht is en zorgen \
dat de kijker heel nauwkeurig de dagelijkse beweging van de hemel volgt en daarom \
is zo ' n kijker zo gebouwd dat hij een gedeelte heeft waar de fotografische plaat zich \
bevindt";

/// The segments implied by the full stops of `EXAMPLE1_PREDICTION`.
pub const EXAMPLE1_SEGMENTS: [&str; 7] = [
    "kijk om je heen, alles beweegt, alles draait.",
    "zo komen wij ter wereld.",
    "de zon, de maan, de planeten en de sterren kijken toe en wij staan in het midden.",
    "onze plaats.",
    "maar Nicolaas Copernicus kwam en stelde dat de Zon in het midden staat en dat wij om haar heen draaien, net als de andere planeten.",
    "een Aarde die beweegt, maar daar zien en voelen we toch niets van.",
    "dat was 1543",
];

pub fn words(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_owned).collect()
}

/// Splits "w1 w2 , w3 ." into words and the mark following each word.
pub fn marked(text: &str) -> (Vec<String>, Vec<PunctLabel>) {
    let mut words = Vec::new();
    let mut labels: Vec<PunctLabel> = Vec::new();
    for tok in text.split_whitespace() {
        match tok {
            "." | "," | "?" | ":" | "-" => {
                *labels.last_mut().expect("mark follows a word") = PunctLabel::from_char(tok.chars().next().unwrap()).unwrap();
            }
            w => {
                words.push(w.to_owned());
                labels.push(PunctLabel::None);
            }
        }
    }
    (words, labels)
}

/// splitmix64, used to derive reproducible pseudo-random behavior.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn hash_str(seed: u64, s: &str) -> u64 {
    s.bytes().fold(mix(seed), |h, b| mix(h ^ b as u64))
}

/// A deterministic classifier whose output depends only on the window
/// content and a seed. `none_weight` out of 16 draws give NONE.
#[derive(Clone, Debug)]
pub struct HashClassifier {
    pub seed: u64,
    pub none_weight: u64,
}

impl HashClassifier {
    pub fn label(&self, window: &[String], i: usize) -> PunctLabel {
        let key = window.join(" ");
        let h = mix(hash_str(self.seed, &key) ^ (i as u64).wrapping_mul(0x1234_5678_9abc_def1));
        if h % 16 < self.none_weight {
            PunctLabel::None
        } else {
            PunctLabel::ALL[1 + (h >> 8) as usize % 5]
        }
    }
}

impl Classifier for HashClassifier {
    fn name(&self) -> &str {
        "hash"
    }

    fn classify(&self, window: &[String]) -> Result<Vec<PunctLabel>, ClassifyError> {
        Ok((0..window.len()).map(|i| self.label(window, i)).collect())
    }
}

/// Random stream over a small vocabulary, so windows repeat now and then.
pub fn random_stream(seed: u64, len: usize, vocab: usize) -> Vec<String> {
    (0..len).map(|i| format!("v{}", mix(seed ^ mix(i as u64)) % vocab as u64)).collect()
}

/// Brute-force segmentation: enumerate windows, count votes, divide, compare.
///
/// Returns the final label per word. `pooled` selects the pooled boundary
/// rule; `segmenters` is a list of label characters.
pub fn oracle_labels(
    stream: &[String],
    window: usize,
    theta: f64,
    segmenters: &[PunctLabel],
    pooled: bool,
    classify: &dyn Fn(&[String]) -> Vec<PunctLabel>,
) -> Vec<PunctLabel> {
    let n = stream.len();
    let w = window.min(n);
    let mut votes = vec![vec![0u32; 6]; n];
    let mut cover = vec![0u32; n];
    let mut start = 0;
    while start + w <= n {
        let out = classify(&stream[start..start + w]);
        for j in 0..w {
            let slot = match out[j] {
                PunctLabel::None => 0,
                PunctLabel::Period => 1,
                PunctLabel::Comma => 2,
                PunctLabel::Question => 3,
                PunctLabel::Colon => 4,
                PunctLabel::Dash => 5,
            };
            votes[start + j][slot] += 1;
            cover[start + j] += 1;
        }
        start += 1;
    }

    let order = [
        PunctLabel::None,
        PunctLabel::Period,
        PunctLabel::Comma,
        PunctLabel::Question,
        PunctLabel::Colon,
        PunctLabel::Dash,
    ];
    (0..n)
        .map(|i| {
            let c = cover[i] as f64;
            // (label, ratio) pairs that pass the threshold
            let mut passing: Vec<(usize, f64)> = Vec::new();
            if pooled {
                let s_total: u32 = (1..6).filter(|k| segmenters.contains(&order[*k])).map(|k| votes[i][k]).sum();
                let mut s_best: Option<usize> = None;
                for k in 1..6 {
                    if segmenters.contains(&order[k]) && s_best.map_or(true, |b| votes[i][k] > votes[i][b]) {
                        s_best = Some(k);
                    }
                }
                if let Some(b) = s_best {
                    if s_total as f64 / c > theta {
                        passing.push((b, s_total as f64 / c));
                    }
                }
                for k in 1..6 {
                    if !segmenters.contains(&order[k]) && votes[i][k] as f64 / c > theta {
                        passing.push((k, votes[i][k] as f64 / c));
                    }
                }
            } else {
                for k in 1..6 {
                    if votes[i][k] as f64 / c > theta {
                        passing.push((k, votes[i][k] as f64 / c));
                    }
                }
            }
            passing.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            passing.first().map_or(PunctLabel::None, |(k, _)| order[*k])
        })
        .collect()
}

/// Exhaustive sign-flip p-value by recursion over the pairs.
pub fn oracle_sign_flip_p(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let observed = d.iter().sum::<f64>().abs();
    let tol = 1e-12 * d.iter().map(|x| x.abs()).sum::<f64>().max(1.0);

    fn walk(d: &[f64], i: usize, signs: &mut Vec<f64>, out: &mut Vec<f64>) {
        if i == d.len() {
            out.push(d.iter().zip(signs.iter()).map(|(x, s)| if *s < 0.0 { -x } else { *x }).sum());
            return;
        }
        for s in [1.0, -1.0] {
            signs.push(s);
            walk(d, i + 1, signs, out);
            signs.pop();
        }
    }
    let mut sums = Vec::new();
    walk(&d, 0, &mut Vec::new(), &mut sums);
    let hits = sums.iter().filter(|s| s.abs() >= observed - tol).count();
    hits as f64 / sums.len() as f64
}

/// Synthetic corpus: sentences from five templates. Each template ends in a
/// fixed terminator word followed by a period; template 3 has a comma before
/// "en".
pub fn template_sentences(count: usize, seed: u64) -> Vec<String> {
    let nouns = ["kat", "hond", "vogel", "auto", "fiets", "boom", "stad", "rivier", "boek", "tafel"];
    let verbs = ["ziet", "zoekt", "vindt", "koopt", "mist", "draagt"];
    let adjs = ["grote", "kleine", "rode", "oude", "nieuwe"];
    (0..count)
        .map(|i| {
            let r = mix(seed ^ mix(i as u64 + 1));
            let n1 = nouns[(r % 10) as usize];
            let n2 = nouns[((r >> 8) % 10) as usize];
            let v = verbs[((r >> 16) % 6) as usize];
            let a = adjs[((r >> 24) % 5) as usize];
            match (r >> 32) % 5 {
                0 => format!("de {a} {n1} {v} de {n2} vandaag."),
                1 => format!("mijn {n1} {v} een {a} {n2} thuis."),
                2 => format!("waar {v} de {n1} nu heen gisteren."),
                3 => format!("ik {v} de {n1} , en jij {v} de {n2} morgen."),
                _ => format!("een {a} {n2} {v} niets meer daar."),
            }
        })
        .collect()
}
