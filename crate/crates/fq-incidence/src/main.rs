fn main() {
    std::process::exit(fq_incidence::cli::run());
}
