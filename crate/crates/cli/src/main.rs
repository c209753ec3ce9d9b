//! `fgcrypt`: file-based front end for the free group ciphers.
//!
//! Exit status 1 means a usage problem (bad flags, unreadable files),
//! 2 means the library rejected the input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fgcrypt::automorphism::{format_automorphism, parse_automorphism};
use fgcrypt::cipher::{
    self, format_cipher_table, format_ciphertext, format_key_file, key_file_alphabet, parse_ciphertext, parse_key_file,
    CipherPublicParams,
};
use fgcrypt::cryptanalysis::{attack_cost_estimate, format_cost, format_report, subset_attack, AttackConfig};
use fgcrypt::keystream::{has_max_period, keystream, parse_seed};
use fgcrypt::matrix::{format_matrices, matrix_to_word, parse_matrices, parse_rep_spec, word_to_matrix, RepSpec};
use fgcrypt::nielsen::{format_moves, format_tuple, nielsen_reduce, parse_tuple};
use fgcrypt::pubkey::{self, PubkeyParams};
use fgcrypt::{Alphabet, FactoredAutomorphism, LcgParams, Prg, RandomSource};

#[derive(Debug, Parser)]
#[command(name = "fgcrypt", version, about = "Free group one-time pad and automorphism public-key tools")]
struct Cli {
    /// Worker threads for table building and the attack.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a one-time pad key file.
    OtpKeygen(OtpKeygen),
    /// Encrypt a plaintext file.
    OtpEncrypt(OtpIo),
    /// Decrypt a ciphertext file.
    OtpDecrypt(OtpDecrypt),
    /// Print the cipher table for the first positions.
    OtpTable(OtpTable),
    /// Compute Alice's public word `f^n(a)`.
    PubkeyKeygen(PubkeyKeygen),
    /// Encrypt a message word for a public word.
    PubkeyEncrypt(PubkeyEncrypt),
    /// Recover the message word from a pair.
    PubkeyDecrypt(PubkeyDecrypt),
    /// Nielsen-reduce a tuple file.
    NielsenReduce(NielsenReduce),
    /// Apply an automorphism to a word.
    AutApply(AutApply),
    /// Write the inverse of an automorphism.
    AutInvert(AutInvert),
    /// Map words to matrices.
    RepEval(RepEval),
    /// Map matrices back to words.
    RepDecode(RepDecode),
    /// Run the subset attack or print its cost.
    Attack(Attack),
    /// Check an LCG for maximal period and print a keystream prefix.
    LcgCheck(LcgCheck),
}

#[derive(Debug, Args)]
struct OtpKeygen {
    /// Generator names, space separated.
    #[arg(long)]
    alphabet: String,
    /// Plaintext symbols, space separated.
    #[arg(long)]
    plaintext: String,
    #[arg(long, default_value_t = 128)]
    modulus_exponent: u32,
    #[arg(long, default_value_t = 5)]
    beta: u128,
    #[arg(long, default_value_t = 3)]
    gamma: u128,
    /// Master seed of the automorphism family (hex64).
    #[arg(long, value_parser = hex64)]
    family_seed: u64,
    /// Seed for key sampling (hex64).
    #[arg(long, value_parser = hex64)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct OtpIo {
    #[arg(long)]
    key: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Explicit schedule, one automorphism file per position.
    #[arg(long = "automorphism")]
    automorphisms: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct OtpDecrypt {
    #[command(flatten)]
    io: OtpIo,
    /// Decrypt by table lookup instead of inverse automorphisms.
    #[arg(long)]
    table: bool,
}

#[derive(Debug, Args)]
struct OtpTable {
    #[arg(long)]
    key: PathBuf,
    /// Number of positions (columns).
    #[arg(long)]
    length: Option<usize>,
    #[arg(long = "automorphism")]
    automorphisms: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PubkeyKeygen {
    #[arg(long)]
    params: PathBuf,
    /// Secret exponent; drawn from `--seed` when absent.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, value_parser = hex64)]
    seed: Option<u64>,
    /// Public word `c = ..`.
    #[arg(long)]
    out: PathBuf,
    /// Where to write `n = ..` when it was drawn.
    #[arg(long)]
    secret_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PubkeyEncrypt {
    #[arg(long)]
    params: PathBuf,
    /// File holding `c = ..`.
    #[arg(long)]
    public: PathBuf,
    /// File holding the message word.
    #[arg(long)]
    message: PathBuf,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long, value_parser = hex64)]
    seed: Option<u64>,
    /// Send `c1` as a matrix.
    #[arg(long)]
    matrix: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PubkeyDecrypt {
    #[arg(long)]
    params: PathBuf,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    pair: PathBuf,
    #[arg(long)]
    matrix: bool,
    /// Longest message the matrix decoder will accept.
    #[arg(long, default_value_t = 4096)]
    max_len: usize,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct NielsenReduce {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    moves_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AutApply {
    #[arg(long)]
    alphabet: String,
    #[arg(long)]
    automorphism: PathBuf,
    /// Word in the alphabet.
    #[arg(long)]
    word: String,
}

#[derive(Debug, Args)]
struct AutInvert {
    #[arg(long)]
    alphabet: String,
    #[arg(long)]
    automorphism: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RepArgs {
    /// Representation file; the default Tits-Lyndon style matrices otherwise.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Used when no spec file is given.
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Debug, Args)]
struct RepEval {
    #[command(flatten)]
    rep: RepArgs,
    /// Words separated by ` | `.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RepDecode {
    #[command(flatten)]
    rep: RepArgs,
    /// Matrices separated by ` | `.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 4096)]
    max_len: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct Attack {
    #[arg(long)]
    alphabet: String,
    #[arg(long = "length-bound", short = 'L')]
    l: usize,
    #[arg(long = "rank", short = 'N')]
    n: usize,
    #[arg(long = "subset-size", short = 'K')]
    k: usize,
    #[arg(long)]
    max_subsets: Option<u64>,
    /// Tuple file with the planted key.
    #[arg(long)]
    planted: Option<PathBuf>,
    /// Only print the cost estimate.
    #[arg(long)]
    estimate: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LcgCheck {
    #[arg(long)]
    modulus_exponent: u32,
    #[arg(long)]
    beta: u128,
    #[arg(long)]
    gamma: u128,
    #[arg(long)]
    alpha: Option<u128>,
    #[arg(long, default_value_t = 8)]
    count: usize,
}

enum Failure {
    Usage(String),
    Domain(fgcrypt::Error),
}

impl From<fgcrypt::Error> for Failure {
    fn from(e: fgcrypt::Error) -> Failure {
        Failure::Domain(e)
    }
}

type Outcome = Result<(), Failure>;

fn hex64(s: &str) -> Result<u64, String> {
    parse_seed(s).ok_or_else(|| format!("expected up to 16 hex digits, found {s:?}"))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&PathBuf>, text: &str) -> Outcome {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn alphabet_arg(s: &str) -> Result<Alphabet, Failure> {
    Alphabet::from_names_line(s).map_err(|e| Failure::Usage(format!("--alphabet: {e}")))
}

fn load_key(path: &Path) -> Result<(CipherPublicParams, cipher::CipherPrivateKey), Failure> {
    Ok(parse_key_file(&read(path)?)?)
}

fn load_schedule(alphabet: &Alphabet, paths: &[PathBuf]) -> Result<Vec<FactoredAutomorphism>, Failure> {
    paths.iter().map(|p| Ok(parse_automorphism(&read(p)?, alphabet)?)).collect()
}

fn load_pubkey_params(path: &Path) -> Result<PubkeyParams, Failure> {
    let text = read(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(pubkey::parse_pubkey_params(&text, &|name| fs::read_to_string(dir.join(name)))?)
}

fn value_line<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| {
        let (k, v) = l.split_once('=')?;
        (k.trim() == key).then(|| v.trim())
    })
}

fn rep_spec(args: &RepArgs) -> Result<RepSpec, Failure> {
    match (&args.spec, &args.alphabet) {
        (Some(p), _) => Ok(parse_rep_spec(&read(p)?)?),
        (None, Some(a)) => Ok(RepSpec::default_for(&alphabet_arg(a)?)),
        (None, None) => Err(Failure::Usage("give --spec or --alphabet".into())),
    }
}

fn otp_keygen(a: OtpKeygen) -> Outcome {
    let alphabet = alphabet_arg(&a.alphabet)?;
    let plain: Vec<char> = a.plaintext.split_whitespace().flat_map(str::chars).collect();
    let lcg = LcgParams::new(a.modulus_exponent, a.beta, a.gamma)?;
    let params = CipherPublicParams::new(alphabet, plain, lcg, a.family_seed)?;
    let key = cipher::keygen(&params, &mut Prg::new(a.seed));
    write(&a.out, &format_key_file(&params, &key))
}

fn otp_encrypt(a: OtpIo) -> Outcome {
    let (params, key) = load_key(&a.key)?;
    let plaintext = read(&a.input)?;
    let c = if a.automorphisms.is_empty() {
        cipher::encrypt(&params, &key, &plaintext)?
    } else {
        let schedule = load_schedule(&params.alphabet, &a.automorphisms)?;
        cipher::encrypt_with_schedule(&params, &key, &plaintext, &schedule)?
    };
    write(&a.out, &format_ciphertext(&params.alphabet, &c))
}

fn otp_decrypt(a: OtpDecrypt) -> Outcome {
    let alphabet = key_file_alphabet(&read(&a.io.key)?)?;
    let (params, key) = load_key(&a.io.key)?;
    let c = parse_ciphertext(&read(&a.io.input)?, &alphabet)?;
    let schedule = if a.io.automorphisms.is_empty() {
        cipher::automorphism_schedule(&params, &key, c.units.len())
    } else {
        load_schedule(&alphabet, &a.io.automorphisms)?
    };
    let plain = if a.table {
        let table = cipher::cipher_table_for(&params, &key, &schedule)?;
        cipher::decrypt_with_table(&params, &table, &c)?
    } else {
        cipher::decrypt_with_schedule(&params, &key, &c, &schedule)?
    };
    write(&a.io.out, &format!("{plain}\n"))
}

fn otp_table(a: OtpTable) -> Outcome {
    let (params, key) = load_key(&a.key)?;
    let schedule = match (a.automorphisms.is_empty(), a.length) {
        (false, _) => load_schedule(&params.alphabet, &a.automorphisms)?,
        (true, Some(z)) => cipher::automorphism_schedule(&params, &key, z),
        (true, None) => return Err(Failure::Usage("give --length or --automorphism".into())),
    };
    let table = cipher::cipher_table_for(&params, &key, &schedule)?;
    write(&a.out, &format_cipher_table(&params, &table))
}

fn exponent(given: Option<u64>, seed: Option<u64>, limit: u64, flag: &str) -> Result<u64, Failure> {
    match (given, seed) {
        (Some(n), _) => Ok(n),
        (None, Some(s)) => Ok(1 + Prg::new(s).below(limit)),
        (None, None) => Err(Failure::Usage(format!("give --{flag} or --seed"))),
    }
}

fn pubkey_keygen(a: PubkeyKeygen) -> Outcome {
    let params = load_pubkey_params(&a.params)?;
    if let Some(k) = params.finite_order_witness() {
        eprintln!("warning: f^{k} is the identity; c would take at most {k} values");
    }
    let n = exponent(a.n, a.seed, params.exponent_limit, "n")?;
    let c = pubkey::alice_keygen(&params, n)?;
    write(&a.out, &format!("c = {}\n", params.alphabet.format_word(&c)))?;
    if let Some(p) = &a.secret_out {
        write(p, &format!("n = {n}\n"))?;
    }
    Ok(())
}

fn parse_word_file(alphabet: &Alphabet, text: &str, key: &str) -> Result<fgcrypt::Word, Failure> {
    let body = value_line(text, key).unwrap_or_else(|| text.trim());
    Ok(alphabet.parse_word(body)?)
}

fn pubkey_encrypt(a: PubkeyEncrypt) -> Outcome {
    let params = load_pubkey_params(&a.params)?;
    let c = parse_word_file(&params.alphabet, &read(&a.public)?, "c")?;
    let m = parse_word_file(&params.alphabet, &read(&a.message)?, "m")?;
    let t = exponent(a.t, a.seed, params.exponent_limit, "t")?;
    let text = if a.matrix {
        pubkey::format_matrix_pair(&params.alphabet, &pubkey::bob_encrypt_matrix(&params, &c, &m, t)?)
    } else {
        pubkey::format_pair(&params.alphabet, &pubkey::bob_encrypt(&params, &c, &m, t)?)
    };
    write(&a.out, &text)
}

fn pubkey_decrypt(a: PubkeyDecrypt) -> Outcome {
    let params = load_pubkey_params(&a.params)?;
    let text = read(&a.pair)?;
    let m = if a.matrix {
        let pair = pubkey::parse_matrix_pair(&text, &params.alphabet)?;
        pubkey::alice_decrypt_matrix(&params, a.n, &pair, a.max_len)?
    } else {
        let pair = pubkey::parse_pair(&text, &params.alphabet)?;
        pubkey::alice_decrypt(&params, a.n, &pair)?
    };
    emit(a.out.as_ref(), &format!("m = {}\n", params.alphabet.format_word(&m)))
}

fn nielsen(a: NielsenReduce) -> Outcome {
    let (alphabet, tuple) = parse_tuple(&read(&a.input)?, None)?;
    let (reduced, moves) = nielsen_reduce(&tuple);
    write(&a.out, &format_tuple(&alphabet, &reduced))?;
    if let Some(p) = &a.moves_out {
        write(p, &format_moves(&moves))?;
    }
    Ok(())
}

fn aut_apply(a: AutApply) -> Outcome {
    let alphabet = alphabet_arg(&a.alphabet)?;
    let f = parse_automorphism(&read(&a.automorphism)?, &alphabet)?;
    let w = alphabet.parse_word(&a.word)?;
    println!("{}", alphabet.format_word(&f.apply(&w)?));
    Ok(())
}

fn aut_invert(a: AutInvert) -> Outcome {
    let alphabet = alphabet_arg(&a.alphabet)?;
    let f = parse_automorphism(&read(&a.automorphism)?, &alphabet)?;
    write(&a.out, &format_automorphism(&alphabet, &f.inverse()))
}

fn rep_eval(a: RepEval) -> Outcome {
    let spec = rep_spec(&a.rep)?;
    let text = read(&a.input)?;
    let ms = text
        .trim()
        .split('|')
        .filter(|s| !s.trim().is_empty())
        .map(|s| Ok(word_to_matrix(&spec, &spec.alphabet().parse_word(s)?)?))
        .collect::<Result<Vec<_>, Failure>>()?;
    write(&a.out, &format_matrices(&ms))
}

fn rep_decode(a: RepDecode) -> Outcome {
    let spec = rep_spec(&a.rep)?;
    let ms = parse_matrices(&read(&a.input)?)?;
    let words = ms
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let w = matrix_to_word(&spec, m, a.max_len)?.ok_or(fgcrypt::Error::DecryptionFailure { unit: i + 1 })?;
            Ok(spec.alphabet().format_word(&w))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    write(&a.out, &format!("{}\n", words.join(" | ")))
}

fn attack(a: Attack) -> Outcome {
    let alphabet = alphabet_arg(&a.alphabet)?;
    let mut cfg = AttackConfig::new(a.l, a.n, a.k);
    if let Some(cap) = a.max_subsets {
        cfg.max_subsets = cap;
    }
    if a.estimate {
        return emit(a.out.as_ref(), &format_cost(&attack_cost_estimate(&cfg, alphabet.rank())));
    }
    let planted = match &a.planted {
        Some(p) => Some(parse_tuple(&read(p)?, Some(&alphabet))?.1),
        None => None,
    };
    let report = subset_attack(&alphabet, &cfg, planted.as_ref())?;
    emit(a.out.as_ref(), &format_report(&alphabet, &report))
}

fn lcg_check(a: LcgCheck) -> Outcome {
    let lcg = LcgParams::new(a.modulus_exponent, a.beta, a.gamma)?;
    println!("max_period = {}", has_max_period(&lcg));
    if let Some(alpha) = a.alpha {
        let xs: Vec<String> = keystream(&lcg, lcg.reduce(alpha), a.count).iter().map(u128::to_string).collect();
        println!("keystream = {}", xs.join(" "));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure::Usage(format!("--jobs: {e}")))?;
    }
    match cli.command {
        Command::OtpKeygen(a) => otp_keygen(a),
        Command::OtpEncrypt(a) => otp_encrypt(a),
        Command::OtpDecrypt(a) => otp_decrypt(a),
        Command::OtpTable(a) => otp_table(a),
        Command::PubkeyKeygen(a) => pubkey_keygen(a),
        Command::PubkeyEncrypt(a) => pubkey_encrypt(a),
        Command::PubkeyDecrypt(a) => pubkey_decrypt(a),
        Command::NielsenReduce(a) => nielsen(a),
        Command::AutApply(a) => aut_apply(a),
        Command::AutInvert(a) => aut_invert(a),
        Command::RepEval(a) => rep_eval(a),
        Command::RepDecode(a) => rep_decode(a),
        Command::Attack(a) => attack(a),
        Command::LcgCheck(a) => lcg_check(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
