//! Line-oriented play against the computer.

use std::io::{BufRead, Write};

use balgame::balance::chooser_translate;
use balgame::game::{
    self, ChooserStrategy, GameRegion, GreedyChooser, PusherMove, PusherStrategy, RandomPusher, RankPusher,
    SubsetChooser,
};
use balgame::threshold::critical_M;
use balgame::{canonical_family, LatticeVector, Sign, VectorFamily};

use crate::args::{PlayArgs, Side};
use crate::commands::{CmdResult, Failure};

fn show_state(out: &mut dyn Write, round: usize, z: &LatticeVector, region: &GameRegion) -> CmdResult {
    let slack = region.slack(z);
    writeln!(out, "round {round}: position {z}  slack {}", LatticeVector::new(slack))?;
    Ok(())
}

/// Reads one trimmed line; `None` at end of input.
fn next_line<R: BufRead>(input: &mut R) -> Result<Option<String>, Failure> {
    let mut s = String::new();
    if input.read_line(&mut s)? == 0 {
        return Ok(None);
    }
    Ok(Some(s.trim().to_string()))
}

pub fn play<R: BufRead, W: Write>(a: &PlayArgs, budget: u128, input: &mut R, out: &mut W) -> CmdResult {
    let n = a.n as usize;
    let m_crit = critical_M(a.n)?.m_crit as i64;
    let m = a.m.unwrap_or(m_crit);
    let region = GameRegion::uniform(n, m);
    let family = canonical_family(n)?;
    let origin = LatticeVector::zeros(n);
    if !region.contains(&origin) {
        return Err(Failure::Usage(format!("M = {m} excludes the origin")));
    }
    writeln!(out, "Game on K_{m} in dimension {n} (M_crit = {m_crit}), {} vectors.", family.len())?;
    match a.human {
        Side::Chooser => human_chooser(a, budget, &region, &family, input, out),
        Side::Pusher => human_pusher(a, m >= m_crit, &region, &family, input, out),
    }
}

fn human_chooser<R: BufRead, W: Write>(
    a: &PlayArgs,
    budget: u128,
    region: &GameRegion,
    family: &VectorFamily,
    input: &mut R,
    out: &mut W,
) -> CmdResult {
    // The deletion table drives the computer when the window is small enough
    // and the origin is lost; otherwise offers are random.
    let solved = game::verdict(region, family, None, budget).ok();
    let table = solved.as_ref().filter(|v| !v.chooser_wins()).map(|v| v.certificate());
    let mut ranked = table.map(|c| RankPusher::new(c, region));
    let mut random = RandomPusher::new(family.len(), a.seed);
    writeln!(out, "You are Chooser: answer each offer with + or - (q quits).")?;
    if table.is_some() {
        writeln!(out, "The computer plays a winning Pusher strategy.")?;
    }
    let mut z = LatticeVector::zeros(family.dim());
    for round in 1..=a.rounds {
        show_state(out, round, &z, region)?;
        let offer = match ranked.as_mut().map(|p| p.offer(&z)) {
            Some(Ok(PusherMove::Offer(j))) => j,
            _ => match random.offer(&z)? {
                PusherMove::Offer(j) => j,
                PusherMove::GameOver => unreachable!("random pusher never stops"),
            },
        };
        let v = &family.members()[offer];
        let sign = loop {
            write!(out, "Pusher offers {v}. Sign [+/-]: ")?;
            out.flush()?;
            let Some(line) = next_line(input)? else {
                writeln!(out)?;
                writeln!(out, "Input ended; game stopped at {z}.")?;
                return Ok(());
            };
            match line.as_str() {
                "+" => break Sign::Plus,
                "-" => break Sign::Minus,
                "q" => {
                    writeln!(out, "Quit at {z}.")?;
                    return Ok(());
                }
                other => writeln!(out, "Please answer + or -, not {other:?}.")?,
            }
        };
        z.add_assign_scaled(v, sign.value());
        if !region.contains(&z) {
            writeln!(out, "Position {z} left K_{} after {round} rounds: Pusher wins.", region.upper()[0])?;
            return Ok(());
        }
    }
    writeln!(out, "Chooser survived {} rounds at {z}.", a.rounds)?;
    Ok(())
}

fn parse_offer(s: &str, family: &VectorFamily) -> Option<usize> {
    if let Ok(i) = s.parse::<usize>() {
        if i < family.len() && !(s.len() == family.dim() && s.chars().all(|c| c == '0' || c == '1')) {
            return Some(i);
        }
    }
    LatticeVector::from_binary(s).and_then(|v| family.index_of(&v))
}

fn human_pusher<R: BufRead, W: Write>(
    a: &PlayArgs,
    at_threshold: bool,
    region: &GameRegion,
    family: &VectorFamily,
    input: &mut R,
    out: &mut W,
) -> CmdResult {
    let ct = if at_threshold { Some(chooser_translate(family.dim())?) } else { None };
    let mut chooser: Box<dyn ChooserStrategy + '_> = match &ct {
        Some(c) => Box::new(SubsetChooser::new(&c.family, c.translate.clone(), &c.subset)?),
        None => Box::new(GreedyChooser::new(family, region)),
    };
    writeln!(out, "You are Pusher: offer a vector by index or as a binary string like {} (q quits).",
        family.members()[family.len() - 1].to_binary().unwrap_or_default())?;
    if family.len() <= 16 {
        for (i, v) in family.members().iter().enumerate() {
            writeln!(out, "  {i}: {v}")?;
        }
    }
    let mut z = LatticeVector::zeros(family.dim());
    for round in 1..=a.rounds {
        show_state(out, round, &z, region)?;
        let j = loop {
            write!(out, "Offer: ")?;
            out.flush()?;
            let Some(line) = next_line(input)? else {
                writeln!(out)?;
                writeln!(out, "Input ended; game stopped at {z}.")?;
                return Ok(());
            };
            if line == "q" {
                writeln!(out, "Quit at {z}.")?;
                return Ok(());
            }
            match parse_offer(&line, family) {
                Some(j) => break j,
                None => writeln!(out, "Not a member: {line:?}. Use 0..{} or a binary string.", family.len() - 1)?,
            }
        };
        let v = &family.members()[j];
        let sign = chooser.respond(&z, j)?;
        z.add_assign_scaled(v, sign.value());
        writeln!(out, "Chooser plays {sign}{v}.")?;
        if !region.contains(&z) {
            writeln!(out, "Position {z} left K_{} after {round} rounds: Pusher wins.", region.upper()[0])?;
            return Ok(());
        }
    }
    writeln!(out, "Chooser survived {} rounds at {z}.", a.rounds)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(human: Side, m: Option<i64>, rounds: usize) -> PlayArgs {
        PlayArgs { n: 2, m, human, rounds, seed: 1 }
    }

    #[test]
    fn chooser_side_validates_input() {
        let mut input = "x\n+\n-\n+\n".as_bytes();
        let mut out = Vec::new();
        play(&args(Side::Chooser, Some(5), 3), 1 << 20, &mut input, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("Please answer + or -"));
        assert!(text.contains("survived 3 rounds"));
    }

    #[test]
    fn pusher_side_against_translate() {
        let mut input = "0\n7\n1\n11\n10\n".as_bytes();
        let mut out = Vec::new();
        play(&args(Side::Pusher, None, 4), 1 << 20, &mut input, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("Not a member: \"7\""), "{text}");
        assert!(text.contains("survived 4 rounds"), "{text}");
    }

    #[test]
    fn eof_stops_cleanly() {
        let mut input = "".as_bytes();
        let mut out = Vec::new();
        play(&args(Side::Chooser, None, 3), 1 << 20, &mut input, &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().contains("Input ended"));
    }
}
