// Writes seeded CSV inputs for the command-line tests into argv[1].
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "precnet/applications.hpp"
#include "precnet/simgen.hpp"

using namespace precnet;
namespace fs = std::filesystem;

namespace {

void write_csv(const fs::path& path, const Matrix& m, bool header) {
    std::ofstream out(path);
    if (header) {
        for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << "x" << j + 1;
        out << '\n';
    }
    char buf[32];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

void write_labels(const fs::path& path, const Labels& y) {
    std::ofstream out(path);
    out << "label\n";
    for (int l : y) out << l << '\n';
}

Matrix shifted(const DataMatrix& z, const Vector& mu) {
    Matrix m = z.values();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += mu[j];
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: cli_fixtures <dir>\n");
        return 2;
    }
    const fs::path dir(argv[1]);
    fs::create_directories(dir);

    {
        ExperimentConfig cfg;
        cfg.seed = 1;
        const SpdMatrix truth = generate_truth(cfg);
        RngStream rng(11);
        write_csv(dir / "ar1.csv", sample_gaussian(120, truth, rng).values(), true);
        RngStream small(12);
        write_csv(dir / "small.csv", sample_gaussian(60, gen_ar1_precision(5, 1.0, small), small).values(), false);
    }
    {
        RngStream rng(21);
        const std::size_t p = 8;
        const SpdMatrix omega = gen_ar1_precision(p, 1.0, rng);
        Vector mu(p);
        for (std::size_t j = 0; j < p; ++j) mu[j] = 10.0 + static_cast<double>(j);
        write_csv(dir / "fc_train.csv", shifted(sample_gaussian(50, omega, rng), mu), true);
        write_csv(dir / "fc_test.csv", shifted(sample_gaussian(20, omega, rng), mu), true);
        write_csv(dir / "fc_omega.csv", omega.sym().to_dense(), false);
        SymMatrix block = omega.sym();
        for (std::size_t i = 4; i < p; ++i)
            for (std::size_t j = 0; j < 4; ++j) block(i, j) = 0.0;
        write_csv(dir / "fc_blockdiag.csv", block.to_dense(), false);
    }
    {
        RngStream rng(31);
        const std::size_t p = 40, n1 = 33, n2 = 97;
        const SpdMatrix omega = gen_ar1_precision(p, 1.0, rng);
        const DataMatrix z = sample_gaussian(n1 + n2, omega, rng);
        Matrix x = z.values();
        Labels y(n1 + n2);
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] = i < n1 ? 1 : 2;
            if (y[i] == 1)
                for (std::size_t j = 0; j < 10; ++j) x(i, 3 * j) += 2.5;
        }
        const DataMatrix data(std::move(x));
        const auto [train, test] = stratified_split(y, 5, 16, 7);
        Labels ytr, yte;
        for (std::size_t i : train) ytr.push_back(y[i]);
        for (std::size_t i : test) yte.push_back(y[i]);
        write_csv(dir / "cl_train.csv", data.select_rows(train).values(), true);
        write_csv(dir / "cl_test.csv", data.select_rows(test).values(), true);
        write_labels(dir / "cl_train_labels.csv", ytr);
        write_labels(dir / "cl_test_labels.csv", yte);
        write_labels(dir / "cl_one_class.csv", Labels(ytr.size(), 1));
    }
    return 0;
}
