//! Range-based contact detection and contact / inter-contact durations.
//!
//! A pair is in contact while the minimal-image distance is at most the
//! sensing range. A session opens on the first in-range sample and closes
//! after `debounce` consecutive out-of-range samples; it ends at the last
//! in-range sample. Sessions and gaps still open when the observation ends
//! are censored and dropped.

use std::io::Write;

use crate::error::{Error, Result};
use crate::neighbors::Pair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactParams {
    /// Sensing range (m).
    pub range: f64,
    /// Consecutive missed samples needed to end a contact.
    pub debounce: u32,
}

impl Default for ContactParams {
    fn default() -> Self {
        ContactParams {
            range: 6.0,
            debounce: 2,
        }
    }
}

impl ContactParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.range.is_finite() && self.range >= 0.0) {
            return Err(Error::param(
                "contact.range",
                format!("{} must be finite and >= 0", self.range),
            ));
        }
        if self.debounce == 0 {
            return Err(Error::param("contact.debounce", "must be at least 1"));
        }
        Ok(())
    }
}

/// A closed contact session.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactEvent {
    pub a: usize,
    pub b: usize,
    pub start: f64,
    pub end: f64,
}

impl ContactEvent {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct OpenSession {
    start: f64,
    last_seen: f64,
    misses: u32,
}

#[derive(Debug, Clone, Default)]
struct PairTrack {
    open: Option<OpenSession>,
    last_end: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ContactLedger {
    params: ContactParams,
    n: usize,
    tracks: Vec<PairTrack>,
    in_range: Vec<bool>,
    events: Vec<ContactEvent>,
    gaps: Vec<(usize, usize, f64)>,
    samples: u64,
}

/// Rounds a time or duration to the nanosecond, removing the representation
/// noise of `k * dt` for decimal time steps.
pub fn round_time(t: f64) -> f64 {
    (t * 1e9).round() / 1e9
}

// rows of the strict upper triangle
fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

fn pair_of(n: usize, mut idx: usize) -> Pair {
    let mut a = 0;
    let mut row = n - 1;
    while idx >= row {
        idx -= row;
        a += 1;
        row -= 1;
    }
    (a, a + 1 + idx)
}

/// Duration samples after censoring.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Durations {
    pub contact: Vec<f64>,
    pub intercontact: Vec<f64>,
}

impl ContactLedger {
    pub fn new(n: usize, params: ContactParams) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        ContactLedger {
            params,
            n,
            tracks: vec![PairTrack::default(); pairs],
            in_range: vec![false; pairs],
            events: Vec::new(),
            gaps: Vec::new(),
            samples: 0,
        }
    }

    pub fn params(&self) -> &ContactParams {
        &self.params
    }

    fn pair_index(&self, a: usize, b: usize) -> usize {
        pair_index(self.n, a, b)
    }

    fn pair_of(&self, idx: usize) -> Pair {
        pair_of(self.n, idx)
    }

    /// Records one sample taken at `time`, given every pair currently in range.
    pub fn observe(&mut self, time: f64, in_range: &[Pair]) {
        self.samples += 1;
        self.in_range.iter_mut().for_each(|f| *f = false);
        for &(a, b) in in_range {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            let idx = self.pair_index(a, b);
            self.in_range[idx] = true;
        }
        let debounce = self.params.debounce;
        let n = self.n;
        for (idx, track) in self.tracks.iter_mut().enumerate() {
            let seen = self.in_range[idx];
            match (&mut track.open, seen) {
                (Some(open), true) => {
                    open.last_seen = time;
                    open.misses = 0;
                }
                (Some(open), false) => {
                    open.misses += 1;
                    if open.misses >= debounce {
                        let closed = *open;
                        track.open = None;
                        let (a, b) = pair_of(n, idx);
                        if let Some(prev_end) = track.last_end {
                            self.gaps.push((a, b, closed.start - prev_end));
                        }
                        track.last_end = Some(closed.last_seen);
                        self.events.push(ContactEvent {
                            a,
                            b,
                            start: closed.start,
                            end: closed.last_seen,
                        });
                    }
                }
                (None, true) => {
                    track.open = Some(OpenSession {
                        start: time,
                        last_seen: time,
                        misses: 0,
                    });
                }
                (None, false) => {}
            }
        }
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// Closed sessions in closing order.
    pub fn events(&self) -> &[ContactEvent] {
        &self.events
    }

    /// Closed sessions sorted by `(a, b, start)`.
    pub fn sorted_events(&self) -> Vec<ContactEvent> {
        let mut ev = self.events.clone();
        ev.sort_by(|x, y| {
            (x.a, x.b)
                .cmp(&(y.a, y.b))
                .then(x.start.total_cmp(&y.start))
        });
        ev
    }

    /// Sessions still open (right-censored) as `(a, b, start)`.
    pub fn open_sessions(&self) -> Vec<(usize, usize, f64)> {
        self.tracks
            .iter()
            .enumerate()
            .filter_map(|(idx, t)| {
                t.open.map(|o| {
                    let (a, b) = self.pair_of(idx);
                    (a, b, o.start)
                })
            })
            .collect()
    }

    /// Contact durations of closed sessions and gaps between successive
    /// closed sessions of the same pair, aggregated over all pairs.
    ///
    /// Single-sample sessions have zero duration and contribute no contact
    /// sample, though they still anchor inter-contact gaps. A gap is only
    /// counted once the session ending it has closed, so gaps running into
    /// a censored session are dropped.
    pub fn finalize(&self) -> Durations {
        Durations {
            contact: self
                .events
                .iter()
                .map(|e| round_time(e.duration()))
                .filter(|&d| d > 0.0)
                .collect(),
            intercontact: self.gaps.iter().map(|&(_, _, g)| round_time(g)).collect(),
        }
    }
}

pub fn write_events_csv<W: Write>(events: &[ContactEvent], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["node_a", "node_b", "start_s", "end_s"])?;
    for e in events {
        w.write_record([
            e.a.to_string(),
            e.b.to_string(),
            e.start.to_string(),
            e.end.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DurationKind {
    Contact,
    Intercontact,
}

impl DurationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DurationKind::Contact => "contact",
            DurationKind::Intercontact => "intercontact",
        }
    }
}

pub fn write_durations_csv<W: Write>(durations: &Durations, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "duration_s"])?;
    for (kind, list) in [
        (DurationKind::Contact, &durations.contact),
        (DurationKind::Intercontact, &durations.intercontact),
    ] {
        for d in list {
            w.write_record([kind.as_str(), &d.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a `kind,duration_s` file back into duration lists.
pub fn read_durations_csv(path: &std::path::Path) -> Result<Durations> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let headers = rdr.headers().map_err(|e| Error::csv(path, e))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["kind", "duration_s"] {
        return Err(Error::param(
            path.display().to_string(),
            "expected header `kind,duration_s`",
        ));
    }
    let mut out = Durations::default();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        let line = row + 2;
        let bad = |reason: String| Error::param(format!("{}:{line}", path.display()), reason);
        let value: f64 = rec
            .get(1)
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad duration `{}`", rec.get(1).unwrap_or(""))))?;
        match rec.get(0).unwrap_or("").trim() {
            "contact" => out.contact.push(value),
            "intercontact" => out.intercontact.push(value),
            other => return Err(bad(format!("unknown kind `{other}`"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Feeds a 2-node ledger an in/out pattern sampled every `dt`.
    fn replay(pattern: &[bool], dt: f64, debounce: u32) -> ContactLedger {
        let mut ledger = ContactLedger::new(
            2,
            ContactParams {
                range: 6.0,
                debounce,
            },
        );
        for (k, &inside) in pattern.iter().enumerate() {
            let pairs: &[Pair] = if inside { &[(0, 1)] } else { &[] };
            ledger.observe(k as f64 * dt, pairs);
        }
        ledger
    }

    #[test]
    fn single_session_duration() {
        let mut pattern = vec![true; 10];
        pattern.extend([false; 20]);
        let ledger = replay(&pattern, 1.0, 2);
        let d = ledger.finalize();
        assert_eq!(d.contact, vec![9.0]);
        assert!(d.intercontact.is_empty());
        assert_eq!(
            ledger.events()[0],
            ContactEvent {
                a: 0,
                b: 1,
                start: 0.0,
                end: 9.0
            }
        );
    }

    #[test]
    fn debounce_absorbs_single_dropout() {
        let mut pattern = vec![true; 5];
        pattern.push(false);
        pattern.extend([true; 5]);
        pattern.extend([false; 3]);
        let d = replay(&pattern, 1.0, 2).finalize();
        assert_eq!(d.contact, vec![10.0]);
        // with debounce 1 the dropout splits the session
        let d = replay(&pattern, 1.0, 1).finalize();
        assert_eq!(d.contact, vec![4.0, 4.0]);
        assert_eq!(d.intercontact, vec![2.0]);
    }

    #[test]
    fn gap_between_sessions() {
        let mut pattern = vec![false; 41];
        for k in (0..=10).chain(20..=30) {
            pattern[k] = true;
        }
        let d = replay(&pattern, 1.0, 2).finalize();
        assert_eq!(d.contact, vec![10.0, 10.0]);
        assert_eq!(d.intercontact, vec![10.0]);
    }

    #[test]
    fn censored_session_dropped() {
        let ledger = replay(&[true; 50], 1.0, 2);
        assert!(ledger.finalize().contact.is_empty());
        assert_eq!(ledger.open_sessions(), vec![(0, 1, 0.0)]);
        // pending close at the end is still open
        let mut pattern = vec![true; 5];
        pattern.push(false);
        assert!(replay(&pattern, 1.0, 2).finalize().contact.is_empty());
    }

    #[test]
    fn never_in_range() {
        let d = replay(&[false; 30], 1.0, 2).finalize();
        assert!(d.contact.is_empty() && d.intercontact.is_empty());
    }

    #[test]
    fn one_session_per_pair_gives_no_gaps() {
        let mut ledger = ContactLedger::new(3, ContactParams::default());
        for k in 0..20 {
            let pairs: Vec<Pair> = if k < 5 {
                vec![(0, 1), (0, 2), (1, 2)]
            } else {
                vec![]
            };
            ledger.observe(k as f64, &pairs);
        }
        let d = ledger.finalize();
        assert_eq!(d.contact.len(), 3);
        assert!(d.intercontact.is_empty());
    }

    #[test]
    fn pair_indexing_round_trips() {
        let ledger = ContactLedger::new(7, ContactParams::default());
        let mut idx = 0;
        for a in 0..7 {
            for b in a + 1..7 {
                assert_eq!(ledger.pair_index(a, b), idx);
                assert_eq!(ledger.pair_of(idx), (a, b));
                idx += 1;
            }
        }
    }

    #[test]
    fn order_of_pair_is_irrelevant() {
        let mut x = ContactLedger::new(3, ContactParams::default());
        let mut y = ContactLedger::new(3, ContactParams::default());
        for k in 0..10 {
            let on = k % 4 < 2;
            x.observe(k as f64, if on { &[(0, 2)] } else { &[] });
            y.observe(k as f64, if on { &[(2, 0)] } else { &[] });
        }
        assert_eq!(x.events(), y.events());
    }

    #[test]
    fn durations_csv_round_trip() {
        let d = Durations {
            contact: vec![1.0, 2.5],
            intercontact: vec![30.0],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        write_durations_csv(&d, std::fs::File::create(&path).unwrap()).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("kind,duration_s\ncontact,1\n"));
        assert_eq!(read_durations_csv(&path).unwrap(), d);
    }
}
