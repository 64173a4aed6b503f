use crate::error::{AtPath, CliError, CliResult};
use crate::{AdversaryArg, Command, GroupArgs, SchemeArg, SeedArg, SideArg};
use std::fs;
use std::io::Write;
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use tcsp_core::braid::{BraidWord, CanonicalForm, GroupParams};
use tcsp_core::codec::{deserialize_canonical, deserialize_word, SymKey, KIND_CANONICAL, MAGIC};
use tcsp_core::elgamal::{
    cs_decrypt, cs_encrypt, cs_keygen, twin_decrypt, twin_encrypt, twin_keygen,
};
use tcsp_core::files::{CiphertextFile, PublicKeyFile, Scheme, SecretKeyFile, CT_MAGIC, KEY_MAGIC};
use tcsp_core::kex::{kex_run, nike_shared_key, run_loopback, KexOptions, NikeIdentity, Role};
use tcsp_core::reduction::adversaries::{ProbingAdversary, RandomAdversary, WitnessAdversary};
use tcsp_core::reduction::{run_reduction, CcsInstance, ReductionFailure, ReductionRun};
use tcsp_core::sampler::{sample_element, sample_subgroup, SeededRng, SubgroupSide};
use tcsp_core::trapdoor::{trapdoor_setup, DecisionQuery};

pub fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Keygen {
            scheme,
            side,
            group,
            seed,
            out,
        } => keygen(scheme, side, &group, &seed, &out),
        Command::Encrypt {
            pk,
            input,
            out,
            seed,
        } => encrypt(&pk, &input, &out, &seed),
        Command::Decrypt { sk, input, out } => decrypt(&sk, &input, out.as_deref()),
        Command::KexDemo {
            listen,
            connect,
            no_confirm,
            nike_sk,
            nike_pk,
            group,
            seed,
        } => {
            let opts = KexOptions {
                confirm: !no_confirm,
            };
            match (listen, connect, nike_sk, nike_pk) {
                (_, _, Some(sk), Some(pk)) => nike(&sk, &pk),
                (Some(addr), None, ..) => kex_tcp(Role::Responder, &addr, &group, &seed, opts),
                (None, Some(addr), ..) => kex_tcp(Role::Initiator, &addr, &group, &seed, opts),
                _ => kex_loopback(&group, &seed, opts),
            }
        }
        Command::TrapdoorDemo {
            trials,
            group,
            seed,
        } => trapdoor_demo(trials, &group, &seed),
        Command::ReduceDemo {
            queries,
            adversary,
            group,
            seed,
        } => reduce_demo(queries, adversary, &group, &seed),
        Command::Inspect { file, word, n } => match (file, word) {
            (Some(path), _) => inspect_file(&path),
            (None, Some(w)) => inspect_word(n, &w),
            (None, None) => Err(CliError::Usage("nothing to inspect".into())),
        },
    }
}

fn params(g: &GroupArgs) -> CliResult<GroupParams> {
    GroupParams::with_default_base(g.l, g.r, g.w).map_err(|e| CliError::Usage(e.to_string()))
}

fn rng(seed: &SeedArg) -> CliResult<SeededRng> {
    match &seed.seed {
        Some(hex) => SeededRng::from_hex(hex)
            .map_err(|_| CliError::Usage("--seed needs 64 hex characters".into())),
        None => {
            let mut s = [0u8; 32];
            getrandom::getrandom(&mut s).map_err(|e| CliError::Entropy(e.to_string()))?;
            Ok(SeededRng::new(s))
        }
    }
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8], private: bool) -> CliResult<()> {
    let mut opts = fs::OpenOptions::new();
    opts.write(true).create(true).truncate(true);
    #[cfg(unix)]
    if private {
        use std::os::unix::fs::OpenOptionsExt;
        opts.mode(0o600);
    }
    #[cfg(not(unix))]
    let _ = private;
    opts.open(path)
        .and_then(|mut f| f.write_all(bytes))
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn with_ext(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn keygen(
    scheme: SchemeArg,
    side: SideArg,
    g: &GroupArgs,
    seed: &SeedArg,
    out: &Path,
) -> CliResult<()> {
    let p = params(g)?;
    let mut rng = rng(seed)?;
    let sk = match scheme {
        SchemeArg::Cs => SecretKeyFile::Cs(cs_keygen(&p, &mut rng)?),
        SchemeArg::Twin => SecretKeyFile::Twin(twin_keygen(&p, &mut rng)?),
        SchemeArg::Nike => {
            let side = match side {
                SideArg::Left => SubgroupSide::Left,
                SideArg::Right => SubgroupSide::Right,
            };
            SecretKeyFile::Nike(p.clone(), NikeIdentity::generate(&p, side, &mut rng)?)
        }
    };
    let (pub_path, sec_path) = (with_ext(out, "pub"), with_ext(out, "sec"));
    write(&pub_path, &sk.public().to_bytes(), false)?;
    write(&sec_path, &sk.to_bytes(), true)?;
    println!("wrote {} and {}", pub_path.display(), sec_path.display());
    Ok(())
}

fn encrypt(pk_path: &Path, input: &Path, out: &Path, seed: &SeedArg) -> CliResult<()> {
    let pk = PublicKeyFile::from_bytes(&read(pk_path)?).at(pk_path)?;
    let m = read(input)?;
    let mut rng = rng(seed)?;
    let (scheme, ciphertext) = match &pk {
        PublicKeyFile::Cs(pk) => (Scheme::Cs, cs_encrypt(pk, &m, &mut rng)?),
        PublicKeyFile::Twin(pk) => (Scheme::Twin, twin_encrypt(pk, &m, &mut rng)?),
        PublicKeyFile::Nike(..) => {
            return Err(CliError::Usage(format!(
                "{}: NIKE keys are for key exchange, not encryption",
                pk_path.display()
            )))
        }
    };
    write(
        out,
        &CiphertextFile { scheme, ciphertext }.to_bytes(),
        false,
    )
}

fn decrypt(sk_path: &Path, input: &Path, out: Option<&Path>) -> CliResult<()> {
    let sk = SecretKeyFile::from_bytes(&read(sk_path)?).at(sk_path)?;
    let ct = CiphertextFile::from_bytes(&read(input)?).at(input)?;
    let m = match (&sk, ct.scheme) {
        (SecretKeyFile::Cs(kp), Scheme::Cs) => cs_decrypt(kp, &ct.ciphertext),
        (SecretKeyFile::Twin(kp), Scheme::Twin) => twin_decrypt(kp, &ct.ciphertext),
        _ => {
            return Err(CliError::Usage(format!(
                "{} is a {:?} ciphertext but {} is a {:?} key",
                input.display(),
                ct.scheme,
                sk_path.display(),
                sk.scheme()
            )))
        }
    }
    .at(input)?;
    match out {
        Some(path) => write(path, &m, false),
        None => std::io::stdout()
            .write_all(&m)
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn key_hex(k: &SymKey) -> String {
    hex::encode(k.as_bytes())
}

fn nike(sk_path: &Path, pk_path: &Path) -> CliResult<()> {
    let (p, me) = match SecretKeyFile::from_bytes(&read(sk_path)?).at(sk_path)? {
        SecretKeyFile::Nike(p, id) => (p, id),
        other => {
            return Err(CliError::Usage(format!(
                "{}: {:?} key, expected NIKE",
                sk_path.display(),
                other.scheme()
            )))
        }
    };
    let (q, peer) = match PublicKeyFile::from_bytes(&read(pk_path)?).at(pk_path)? {
        PublicKeyFile::Nike(q, pk) => (q, pk),
        other => {
            return Err(CliError::Usage(format!(
                "{}: {:?} key, expected NIKE",
                pk_path.display(),
                other.scheme()
            )))
        }
    };
    if p != q {
        return Err(CliError::Usage(
            "key files use different group parameters".into(),
        ));
    }
    println!("shared key: {}", key_hex(&nike_shared_key(&me, &peer)?));
    Ok(())
}

fn kex_loopback(g: &GroupArgs, seed: &SeedArg, opts: KexOptions) -> CliResult<()> {
    let p = params(g)?;
    let mut master = rng(seed)?;
    let ri = SeededRng::new(master.bytes());
    let rr = SeededRng::new(master.bytes());
    let run = run_loopback(&p, ri, rr, opts, None);
    println!(
        "transcript: initiator {} bytes, responder {} bytes",
        run.transcript[0].len(),
        run.transcript[1].len()
    );
    let ki = run.initiator?;
    let kr = run.responder?;
    println!("initiator key: {}", key_hex(&ki));
    println!("responder key: {}", key_hex(&kr));
    if ki != kr {
        return Err(CliError::Core(tcsp_core::Error::ConfirmationMismatch));
    }
    println!("keys match: yes");
    Ok(())
}

fn kex_tcp(
    role: Role,
    addr: &str,
    g: &GroupArgs,
    seed: &SeedArg,
    opts: KexOptions,
) -> CliResult<()> {
    let p = params(g)?;
    let mut rng = rng(seed)?;
    let mut stream = match role {
        Role::Responder => {
            let listener = TcpListener::bind(addr).map_err(CliError::Net)?;
            println!(
                "listening on {}",
                listener.local_addr().map_err(CliError::Net)?
            );
            std::io::stdout().flush().ok();
            listener.accept().map_err(CliError::Net)?.0
        }
        Role::Initiator => TcpStream::connect(addr).map_err(CliError::Net)?,
    };
    let k = kex_run(role, &mut stream, &p, &mut rng, opts)?;
    println!("session key: {}", key_hex(&k));
    Ok(())
}

fn pct(a: usize, b: usize) -> String {
    format!("{a}/{b} ({:.2}%)", 100.0 * a as f64 / b.max(1) as f64)
}

fn trapdoor_demo(trials: usize, g: &GroupArgs, seed: &SeedArg) -> CliResult<()> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let p = params(g)?;
    let mut rng = rng(seed)?;
    let base = p.base().normal_form();
    let (mut complete, mut rejected, mut random_pass) = (0, 0, 0);
    let mut td = None;
    for t in 0..trials {
        if t % 100 == 0 {
            let x1 = sample_subgroup(&p, SubgroupSide::Left, &mut rng)?;
            td = Some(trapdoor_setup(&p, &base.conjugate_by(&x1)?, &mut rng)?);
        }
        let td = td.as_ref().expect("trapdoor set up");

        let y = sample_subgroup(&p, SubgroupSide::Right, &mut rng)?;
        let honest = DecisionQuery::new(
            base.conjugate_by(&y)?,
            td.x1().conjugate_by(&y)?,
            td.x2().conjugate_by(&y)?,
        )?;
        complete += td.check(&honest)? as usize;

        // One of Z1, Z2 replaced by a different conjugate.
        let mut half = honest.clone();
        while half == honest {
            let y2 = sample_subgroup(&p, SubgroupSide::Right, &mut rng)?;
            if t % 2 == 0 {
                half.z1 = td.x1().conjugate_by(&y2)?;
            } else {
                half.z2 = td.x2().conjugate_by(&y2)?;
            }
        }
        rejected += !td.check(&half)? as usize;

        let mut random = || -> tcsp_core::Result<CanonicalForm> {
            base.conjugate_by(&sample_element(&p, &mut rng)?)
        };
        let q = DecisionQuery::new(random()?, random()?, random()?)?;
        random_pass += td.check(&q)? as usize;
    }
    println!("parameters: l={} r={} W={}", p.l(), p.r(), p.sample_len());
    println!("trials: {trials}");
    println!("completeness: {}", pct(complete, trials));
    println!("half-dishonest rejection: {}", pct(rejected, trials));
    println!("random pass: {}", pct(random_pass, trials));
    Ok(())
}

fn reduce_demo(
    queries: usize,
    adversary: AdversaryArg,
    g: &GroupArgs,
    seed: &SeedArg,
) -> CliResult<()> {
    let p = params(g)?;
    let mut rng = rng(seed)?;
    let (inst, wit) = CcsInstance::generate(&p, &mut rng)?;
    let probe_rng = SeededRng::new(rng.bytes());
    let (run, issued): (ReductionRun, Vec<_>) = match adversary {
        AdversaryArg::Perfect => {
            let mut adv =
                ProbingAdversary::new(probe_rng, queries, WitnessAdversary::new(wit.y.clone()));
            (run_reduction(&inst, &mut adv, &mut rng)?, adv.issued)
        }
        AdversaryArg::Random => {
            let inner = RandomAdversary::new(SeededRng::new(rng.bytes()));
            let mut adv = ProbingAdversary::new(probe_rng, queries, inner);
            (run_reduction(&inst, &mut adv, &mut rng)?, adv.issued)
        }
    };
    let (mut honest, mut honest_ok, mut dishonest, mut dishonest_ok) = (0, 0, 0, 0);
    for q in &issued {
        let truth = tcsp_core::trapdoor::truth_2ccsp_by_ephemeral(
            &q.ephemeral,
            &run.challenge.x1,
            &run.challenge.x2,
            &q.query,
        )?;
        if truth {
            honest += 1;
            honest_ok += q.answer as usize;
        } else {
            dishonest += 1;
            dishonest_ok += !q.answer as usize;
        }
    }
    let expected = wit.shared(&p)?;
    println!("parameters: l={} r={} W={}", p.l(), p.r(), p.sample_len());
    println!("queries: {}", run.transcript.len());
    println!(
        "oracle agreement: {} (honest {}, dishonest {})",
        pct(honest_ok + dishonest_ok, issued.len()),
        pct(honest_ok, honest),
        pct(dishonest_ok, dishonest)
    );
    let (outcome, matches) = match &run.outcome {
        Ok(z) => ("success", if *z == expected { "yes" } else { "no" }),
        Err(ReductionFailure::Rejected) => ("rejected", "n/a"),
        Err(ReductionFailure::GaveUp) => ("gave up", "n/a"),
    };
    println!("outcome: {outcome}");
    println!("matches ccs(X, Y): {matches}");
    Ok(())
}

fn print_params(p: &GroupParams) {
    println!("parameters: l={} r={} W={}", p.l(), p.r(), p.sample_len());
    println!("base g: {}", p.base());
}

fn print_element(name: &str, e: &CanonicalForm) {
    println!("{name}: {e}");
    println!(
        "  (n={}, Δ-exponent {}, {} factors)",
        e.strands(),
        e.delta_exp(),
        e.factors().len()
    );
}

fn inspect_file(path: &Path) -> CliResult<()> {
    let bytes = read(path)?;
    if bytes.starts_with(KEY_MAGIC) {
        // Byte 9 is the public/secret marker.
        if bytes.get(9) == Some(&0x02) {
            let sk = SecretKeyFile::from_bytes(&bytes).at(path)?;
            println!("secret {:?} key", sk.scheme());
            inspect_public(&sk.public());
            let secrets: Vec<&BraidWord> = match &sk {
                SecretKeyFile::Cs(kp) => vec![kp.secret()],
                SecretKeyFile::Twin(kp) => kp.secrets().iter().collect(),
                SecretKeyFile::Nike(_, id) => id.secrets().iter().collect(),
            };
            for (i, s) in secrets.iter().enumerate() {
                println!("secret x{}: {s}", i + 1);
            }
        } else {
            let pk = PublicKeyFile::from_bytes(&bytes).at(path)?;
            println!("public {:?} key", pk.scheme());
            inspect_public(&pk);
        }
    } else if bytes.starts_with(CT_MAGIC) {
        let ct = CiphertextFile::from_bytes(&bytes).at(path)?;
        println!("{:?} ciphertext", ct.scheme);
        print_element("Y", &ct.ciphertext.header);
        println!("body: {} bytes", ct.ciphertext.sealed.ct.len());
        println!("tag: {}", hex::encode(ct.ciphertext.sealed.tag));
    } else if bytes.starts_with(MAGIC) {
        if bytes.get(5) == Some(&KIND_CANONICAL) {
            print_element("element", &deserialize_canonical(&bytes).at(path)?);
        } else {
            let w = deserialize_word(&bytes).at(path)?;
            println!("word on {} strands: {w}", w.strands());
            print_element("normal form", &w.normal_form());
        }
    } else {
        return Err(CliError::File {
            path: path.to_path_buf(),
            source: tcsp_core::Error::Parse {
                offset: 0,
                reason: "unrecognized magic".into(),
            },
        });
    }
    Ok(())
}

fn inspect_public(pk: &PublicKeyFile) {
    print_params(pk.params());
    match pk {
        PublicKeyFile::Cs(pk) => print_element("X", &pk.x),
        PublicKeyFile::Twin(pk) => {
            print_element("X1", &pk.x1);
            print_element("X2", &pk.x2);
        }
        PublicKeyFile::Nike(_, pk) => {
            println!("side: {:?}", pk.side);
            print_element("X1", &pk.elements[0]);
            print_element("X2", &pk.elements[1]);
        }
    }
}

fn inspect_word(n: u16, text: &str) -> CliResult<()> {
    let letters = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<i16>()
                .map_err(|_| CliError::Usage(format!("bad letter {s:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let w = BraidWord::new(n, letters).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("word on {n} strands: {w}");
    print_element("normal form", &w.normal_form());
    Ok(())
}
