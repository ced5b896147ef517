fn main() {
    imfilter::cli::main()
}
