use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use gossip_core::concat::{concat_trace, concatenate, load_ccode, save_ccode, InnerCode};
use gossip_core::designs::{
    cyclic_design, embed_sts, inversive_plane, lambda_bar_s, lambda_s, load_design,
    projective_plane, save_design, steiner_triple, verify_design, Design, Point,
};
use gossip_core::gossip::{
    accusation_groups, code_params, from_design_with, full_gossip, is_embedded, load_code,
    save_code, square_gossip, GossipCode, SymbolOrder,
};
use gossip_core::repro::{repro, Target};
use gossip_core::traceability::{
    check_distinctness, gossip_to_ts, load_scheme, save_scheme, ts_from_cyclic, ts_to_gossip,
    ts_trace, PirateDecoder,
};
use gossip_core::tracing::{
    brute_force_trace, make_pirate_word, trace_nonzero, trace_only_erasures, ChoicePolicy,
    Coalition, PirateWord, Strategy, StrategyKind, TraceReport,
};
use gossip_core::watermark::{decode_pgm, detect, embed, encode_pgm, GrayImage};
use gossip_core::{Error, Result};

use crate::args::*;

/// What a command prints, and whether it reports a domain failure.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub failed: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            failed: false,
        }
    }

    fn of<T: Serialize>(text: String, value: &T) -> Self {
        Outcome::ok(text, to_json(value))
    }
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("results serialize to JSON")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn order(o: Order) -> SymbolOrder {
    match o {
        Order::Ascending => SymbolOrder::Ascending,
        Order::Development => SymbolOrder::Development,
    }
}

fn set(xs: &[Point]) -> String {
    let items: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Design(cmd) => design(cmd),
        Command::Gossip(cmd) => gossip(cmd),
        Command::Ts(cmd) => ts(cmd),
        Command::Simulate(args) => simulate(args, cli.seed),
        Command::Trace(args) => trace(args, cli.budget),
        Command::Concat(cmd) => concat(cmd),
        Command::Wm(cmd) => wm(cmd, cli.seed),
        Command::Repro { target } => run_repro(target),
    }
}

fn design_outcome(d: &Design) -> Outcome {
    Outcome::of(save_design(d), d)
}

fn design(cmd: &DesignCmd) -> Result<Outcome> {
    let d = match cmd {
        DesignCmd::Projective { p } => projective_plane(*p)?,
        DesignCmd::Steiner { v } => steiner_triple(*v)?,
        DesignCmd::Inversive { p } => inversive_plane(*p)?,
        DesignCmd::Cyclic { base, v, t, lambda } => {
            let d = cyclic_design(base, *v)?;
            let t = t.unwrap_or(d.t());
            d.with_params(t, *lambda)?
        }
        DesignCmd::EmbedSts { file } => embed_sts(&load_design(&read(file)?, false)?)?,
        DesignCmd::Verify { file } => {
            let d = load_design(&read(file)?, true)?;
            let report = verify_design(&d)?;
            let text = match (&report.witness, report.witness_count) {
                (Some(w), Some(n)) => format!(
                    "invalid: subset {w:?} lies in {n} blocks, expected {}\n",
                    d.lambda()
                ),
                _ => format!(
                    "valid {}-({},{},{}) design with {} blocks\n",
                    d.t(),
                    d.v(),
                    d.k(),
                    d.lambda(),
                    d.b()
                ),
            };
            return Ok(Outcome {
                text,
                failed: !report.valid,
                json: to_json(&report),
            });
        }
        DesignCmd::Lambda { file, s } => {
            let d = load_design(&read(file)?, false)?;
            let (ls, lbs) = (lambda_s(&d, *s)?, lambda_bar_s(&d, *s)?);
            return Ok(Outcome::ok(
                format!("lambda_{s}={ls} lambda_bar_{s}={lbs}\n"),
                json!({ "s": s, "lambda_s": ls, "lambda_bar_s": lbs }),
            ));
        }
    };
    Ok(design_outcome(&d))
}

fn code_outcome(code: &GossipCode) -> Outcome {
    Outcome::of(save_code(code), code)
}

fn gossip(cmd: &GossipCmd) -> Result<Outcome> {
    match cmd {
        GossipCmd::FromDesign { file, order: o } => {
            let d = load_design(&read(file)?, false)?;
            Ok(code_outcome(&from_design_with(&d, order(*o))?))
        }
        GossipCmd::Square { q } => Ok(code_outcome(&square_gossip(*q)?)),
        GossipCmd::Full { m, q } => Ok(code_outcome(&full_gossip(*m, *q)?)),
        GossipCmd::Params { m, q, c } => {
            let p = code_params(*m, *q, *c)?;
            Ok(Outcome::of(
                format!("l={} w={} d={}\n", p.length, p.weight, p.distance),
                &p,
            ))
        }
        GossipCmd::Groups { code, column } => {
            let code = load_code(&read(code)?)?;
            let j = column
                .checked_sub(1)
                .ok_or_else(|| Error::Parameter("columns are numbered from 1".into()))?;
            let groups = accusation_groups(&code, j)?;
            let text: String = groups.iter().map(|g| set(g) + "\n").collect();
            Ok(Outcome::of(text, &groups))
        }
        GossipCmd::Embedded { inner, outer } => {
            let inner = load_code(&read(inner)?)?;
            let outer = load_code(&read(outer)?)?;
            let embedded = is_embedded(&inner, &outer)?;
            Ok(Outcome {
                text: format!("{}\n", if embedded { "embedded" } else { "not embedded" }),
                json: json!({ "embedded": embedded }),
                failed: !embedded,
            })
        }
    }
}

fn ts(cmd: &TsCmd) -> Result<Outcome> {
    match cmd {
        TsCmd::FromCyclic { base, v } => {
            let scheme = ts_from_cyclic(base, *v)?;
            Ok(Outcome::of(save_scheme(&scheme), &scheme))
        }
        TsCmd::ToGossip {
            scheme,
            c,
            order: o,
        } => {
            let scheme = load_scheme(&read(scheme)?)?;
            Ok(code_outcome(&ts_to_gossip(&scheme, *c, order(*o))?))
        }
        TsCmd::FromGossip { code } => {
            let (w, scheme) = gossip_to_ts(&load_code(&read(code)?)?)?;
            Ok(Outcome::ok(
                format!("# traceability strength w = {w}\n{}", save_scheme(&scheme)),
                json!({ "w": w, "scheme": to_json(&scheme) }),
            ))
        }
        TsCmd::Trace { scheme, decoder } => {
            let scheme = load_scheme(&read(scheme)?)?;
            let f = PirateDecoder::new(decoder.iter().copied(), &scheme)?;
            let exposed = ts_trace(&scheme, &f);
            Ok(Outcome::of(
                format!(
                    "exposed {} overlap {}\n",
                    set(&exposed.users),
                    exposed.overlap
                ),
                &exposed,
            ))
        }
        TsCmd::Check { scheme, c } => {
            let distinct = check_distinctness(&load_scheme(&read(scheme)?)?, *c);
            Ok(Outcome {
                text: format!("{}\n", if distinct { "distinct" } else { "not distinct" }),
                json: json!({ "distinct": distinct }),
                failed: !distinct,
            })
        }
    }
}

fn simulate(args: &SimulateArgs, seed: u64) -> Result<Outcome> {
    let code = load_code(&read(&args.code)?)?;
    let w = Coalition::new(args.coalition.iter().copied(), code.m())?;
    let kind = match args.strategy {
        StrategyArg::NoErasures => StrategyKind::NoErasures,
        StrategyArg::SelectiveErasures => StrategyKind::SelectiveErasures,
        StrategyArg::OnlyErasures => StrategyKind::OnlyErasures,
    };
    let mut strategy = Strategy {
        kind,
        policy: match args.policy {
            PolicyArg::Random => ChoicePolicy::Random,
            PolicyArg::FirstMember => ChoicePolicy::FirstMember,
        },
        allow_oversize: args.allow_oversize,
    };
    let sim = make_pirate_word(&code, &w, &mut strategy, seed)?;
    let mut text = format!("{}\n", sim.word);
    if sim.out_of_model {
        text.insert_str(0, "# out of model: coalition exceeds c\n");
    }
    Ok(Outcome::of(text, &sim))
}

fn report_outcome(report: TraceReport) -> Outcome {
    let text = if report.untraceable {
        "untraceable\n".to_string()
    } else if !report.coalitions.is_empty() {
        report.coalitions.iter().map(|c| set(c) + "\n").collect()
    } else {
        format!("accused {}\n", set(&report.accused))
    };
    Outcome {
        text,
        failed: report.untraceable,
        json: to_json(&report),
    }
}

fn trace(args: &TraceArgs, budget: u128) -> Result<Outcome> {
    let code = load_code(&read(&args.code)?)?;
    let word = PirateWord::load(&read(&args.word)?)?;
    let report = match args.method {
        Method::Nonzero => trace_nonzero(&code, &word)?,
        Method::Zeros => trace_only_erasures(&code, &word)?,
        Method::Brute => brute_force_trace(&code, &word, args.c.unwrap_or(code.c()), budget)?,
    };
    Ok(report_outcome(report))
}

fn concat(cmd: &ConcatCmd) -> Result<Outcome> {
    match cmd {
        ConcatCmd::Build { inner, outer } => {
            let ccode = concatenate(InnerCode::builtin(inner)?, load_code(&read(outer)?)?)?;
            Ok(Outcome::of(save_ccode(&ccode), &ccode))
        }
        ConcatCmd::Trace { ccode, word } => {
            let ccode = load_ccode(&read(ccode)?)?;
            let t = concat_trace(&ccode, &PirateWord::load(&read(word)?)?)?;
            let mut out = report_outcome(t.report.clone());
            out.text = format!(
                "outer {}\nstage {}\n{}",
                t.decoded.outer_word, t.stage, out.text
            );
            out.json = to_json(&t);
            Ok(out)
        }
    }
}

fn codeword(mark: &MarkArgs) -> Result<(Vec<u16>, usize)> {
    let code = load_code(&read(&mark.code)?)?;
    if mark.row == 0 || mark.row as usize > code.m() {
        return Err(Error::Parameter(format!(
            "row {} outside 1..={}",
            mark.row,
            code.m()
        )));
    }
    Ok((code.row(mark.row).to_vec(), code.q()))
}

fn load_image(path: &Path) -> Result<GrayImage> {
    decode_pgm(&fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?)
}

fn wm(cmd: &WmCmd, seed: u64) -> Result<Outcome> {
    match cmd {
        WmCmd::Embed {
            input,
            output,
            mark,
            alpha,
            ascii,
        } => {
            let (cw, q) = codeword(mark)?;
            let marked = embed(&load_image(input)?, &cw, q, *alpha, seed)?;
            write(output, &encode_pgm(&marked, *ascii)?)?;
            Ok(Outcome::ok(
                format!("wrote {}\n", output.display()),
                json!({ "output": output, "alpha": alpha, "seed": seed }),
            ))
        }
        WmCmd::Detect {
            input,
            mark,
            threshold,
        } => {
            let (cw, q) = codeword(mark)?;
            let d = detect(&load_image(input)?, &cw, q, seed, *threshold)?;
            Ok(Outcome::of(
                format!("correlation {:.4} detected {}\n", d.correlation, d.detected),
                &d,
            ))
        }
        WmCmd::Noise {
            output,
            width,
            height,
            ascii,
        } => {
            let img = GrayImage::noise(*width, *height, seed)?;
            write(output, &encode_pgm(&img, *ascii)?)?;
            Ok(Outcome::ok(
                format!("wrote {}\n", output.display()),
                json!({ "output": output, "width": width, "height": height }),
            ))
        }
    }
}

fn run_repro(target: &str) -> Result<Outcome> {
    let targets = if target == "all" {
        Target::ALL.to_vec()
    } else {
        vec![target.parse()?]
    };
    let mut text = String::new();
    let mut results = Vec::new();
    let mut failed = false;
    for t in targets {
        let out = repro(t)?;
        failed |= !out.matched;
        let level = match out.level {
            gossip_core::repro::MatchLevel::Exact => "exact",
            gossip_core::repro::MatchLevel::ColumnPermutation => "up to column permutation",
        };
        text += &format!(
            "{t}: {} ({level})\n",
            if out.matched { "match" } else { "MISMATCH" }
        );
        for note in &out.notes {
            text += &format!("  {note}\n");
        }
        if target != "all" || !out.matched {
            text += &out.generated;
        }
        text += &out.diff;
        results.push(out);
    }
    Ok(Outcome {
        text,
        json: to_json(&results),
        failed,
    })
}
