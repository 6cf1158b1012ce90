//
// Project     : hcmx
// Module      : lowrank
// Description : SVD truncation and ACA
//

#include "hcmx/lowrank.hpp"

#include <stdexcept>
#include <vector>

namespace hcmx::lr {

Eigen::Index rank_from_singular_values(const Eigen::VectorXd& sigma, double eps) {
    if (sigma.size() == 0 || sigma[0] <= 0.0)
        return 0;
    Eigen::Index k = 0;
    while (k < sigma.size() && sigma[k] > eps * sigma[0])
        ++k;
    return k;
}

namespace {

struct QrParts {
    Eigen::MatrixXd Q; // rows x r
    Eigen::MatrixXd R; // r x k
};

QrParts thin_qr(const Eigen::MatrixXd& A) {
    const Eigen::Index r = std::min(A.rows(), A.cols());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    QrParts parts;
    parts.Q = qr.householderQ() * Eigen::MatrixXd::Identity(A.rows(), r);
    parts.R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    return parts;
}

struct CoreSvd {
    QrParts qu, qv;
    Eigen::BDCSVD<Eigen::MatrixXd> svd;
    Eigen::Index rank = 0;
};

CoreSvd core_svd(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                 const TruncationCriterion& crit) {
    if (U.cols() != V.cols())
        throw std::invalid_argument("svd_truncate: factor ranks differ");
    CoreSvd c;
    c.qu = thin_qr(U);
    c.qv = thin_qr(V);
    c.svd.compute(c.qu.R * c.qv.R.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    c.rank = rank_from_singular_values(c.svd.singularValues(), crit.eps);
    if (crit.k_max >= 0)
        c.rank = std::min(c.rank, crit.k_max);
    return c;
}

} // namespace

LowrankBlock svd_truncate(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                          const TruncationCriterion& crit) {
    if (U.cols() != V.cols())
        throw std::invalid_argument("svd_truncate: factor ranks differ");
    if (U.cols() == 0)
        return LowrankBlock::zero(U.rows(), V.rows());
    const auto c = core_svd(U, V, crit);
    const Eigen::Index k = c.rank;
    LowrankBlock out;
    out.U = c.qu.Q * c.svd.matrixU().leftCols(k) *
            c.svd.singularValues().head(k).asDiagonal();
    out.V = c.qv.Q * c.svd.matrixV().leftCols(k);
    return out;
}

SvdFactors svd_factors(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                       const TruncationCriterion& crit) {
    if (U.cols() != V.cols())
        throw std::invalid_argument("svd_factors: factor ranks differ");
    SvdFactors out;
    if (U.cols() == 0) {
        out.W.resize(U.rows(), 0);
        out.X.resize(V.rows(), 0);
        out.sigma.resize(0);
        return out;
    }
    const auto c = core_svd(U, V, crit);
    const Eigen::Index k = c.rank;
    out.W = c.qu.Q * c.svd.matrixU().leftCols(k);
    out.X = c.qv.Q * c.svd.matrixV().leftCols(k);
    out.sigma = c.svd.singularValues().head(k);
    return out;
}

AcaResult aca_approximate(const BlockView& block, double eps, Eigen::Index k_max) {
    const auto rows = static_cast<Eigen::Index>(block.rows);
    const auto cols = static_cast<Eigen::Index>(block.cols);
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("aca_approximate: empty block");
    if (k_max < 0)
        k_max = std::min(rows, cols);
    k_max = std::min(k_max, std::min(rows, cols));

    Eigen::MatrixXd U(rows, k_max);
    Eigen::MatrixXd V(cols, k_max);
    std::vector<bool> row_used(rows, false);
    std::vector<bool> col_used(cols, false);

    Eigen::Index k = 0;
    Eigen::Index next_row = 0;
    double norm2 = 0.0; // running |M_k|_F^2 estimate
    bool capped = false;

    while (k < k_max) {
        // pivot row: prefer the rule's candidate, fall back to the first
        // unused row; rows whose residual vanished are skipped
        Eigen::Index i = -1;
        Eigen::Index j = -1;
        Eigen::VectorXd res_row(cols);
        while (true) {
            Eigen::Index cand =
                (next_row >= 0 && next_row < rows && !row_used[next_row]) ? next_row : -1;
            next_row = -1;
            if (cand < 0)
                for (Eigen::Index r = 0; r < rows; ++r)
                    if (!row_used[r]) {
                        cand = r;
                        break;
                    }
            if (cand < 0)
                break; // all rows consumed: block reproduced exactly
            row_used[cand] = true;
            for (Eigen::Index c = 0; c < cols; ++c)
                res_row[c] = block.entry(cand, c);
            if (k > 0)
                res_row -= V.leftCols(k) * U.leftCols(k).row(cand).transpose();
            double best = 0.0;
            for (Eigen::Index c = 0; c < cols; ++c)
                if (!col_used[c] && std::abs(res_row[c]) > best) {
                    best = std::abs(res_row[c]);
                    j = c;
                }
            if (best > 0.0) {
                i = cand;
                break;
            }
            j = -1;
        }
        if (i < 0)
            break;

        const double pivot = res_row[j];
        Eigen::VectorXd res_col(rows);
        for (Eigen::Index r = 0; r < rows; ++r)
            res_col[r] = block.entry(r, j);
        if (k > 0)
            res_col -= U.leftCols(k) * V.leftCols(k).row(j).transpose();
        res_col /= pivot;

        const double uu = res_col.squaredNorm();
        const double vv = res_row.squaredNorm();
        // a cross below the target accuracy is not committed
        if (k > 0 && std::sqrt(uu * vv) <= eps * std::sqrt(std::max(norm2, 0.0)))
            break;

        col_used[j] = true;
        U.col(k) = res_col;
        V.col(k) = res_row;
        double dot = 0.0;
        if (k > 0)
            dot = (U.leftCols(k).transpose() * U.col(k))
                      .dot(V.leftCols(k).transpose() * V.col(k));
        norm2 += 2.0 * dot + uu * vv;
        ++k;
        if (k == k_max)
            capped = true;

        // pivot rule: next row is the largest entry of the current column
        next_row = -1;
        double rbest = -1.0;
        for (Eigen::Index r = 0; r < rows; ++r)
            if (!row_used[r] && std::abs(U(r, k - 1)) > rbest) {
                rbest = std::abs(U(r, k - 1));
                next_row = r;
            }
    }

    AcaResult out;
    out.lr.U = U.leftCols(k);
    out.lr.V = V.leftCols(k);
    out.rank_capped = capped;
    return out;
}

} // namespace hcmx::lr
