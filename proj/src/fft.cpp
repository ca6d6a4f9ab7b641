#include "bhcp/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bhcp::fft {

namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

}  // namespace

Plan& Plan::operator=(Plan&& other) noexcept
{
    if (this != &other) {
        if (plan_) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        plan_ = other.plan_;
        other.plan_ = nullptr;
    }
    return *this;
}

Plan::~Plan()
{
    if (plan_) {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
}

SineTransform::SineTransform(int dim, std::size_t m)
    : dim_(dim), m_(m), size_(dim == 1 ? m : m * m)
{
    if (dim != 1 && dim != 2) throw std::invalid_argument("SineTransform: dim must be 1 or 2");
    if (m == 0) throw std::invalid_argument("SineTransform: empty grid");

    // FFTW's RODFT00 of length m is 2 * sum_j x_j sin(pi (j+1)(k+1) / (m+1));
    // the orthonormal DST-I carries sqrt(2 / (m+1)) instead.
    scale_ = std::pow(1.0 / std::sqrt(2.0 * static_cast<double>(m + 1)), dim);

    const int n[2] = {static_cast<int>(m), static_cast<int>(m)};
    const fftw_r2r_kind kinds[2] = {FFTW_RODFT00, FFTW_RODFT00};

    std::vector<double> scratch(2 * size_);
    std::lock_guard lock(planner_mutex());
    fftw_plan rp = fftw_plan_many_r2r(dim, n, 1, scratch.data(), nullptr, 1, 0, scratch.data(),
                                      nullptr, 1, 0, kinds, kPlanFlags);
    fftw_plan cp = fftw_plan_many_r2r(dim, n, 2, scratch.data(), nullptr, 2, 1, scratch.data(),
                                      nullptr, 2, 1, kinds, kPlanFlags);
    if (!rp || !cp) throw std::runtime_error("SineTransform: FFTW planning failed");
    real_plan_ = std::make_shared<const Plan>(rp);
    complex_plan_ = std::make_shared<const Plan>(cp);
}

void SineTransform::apply(std::span<double> field) const
{
    if (field.size() != size_) throw std::invalid_argument("SineTransform: length mismatch");
    fftw_execute_r2r(real_plan_->get(), field.data(), field.data());
    for (double& v : field) v *= scale_;
}

void SineTransform::apply(std::span<cplx> field) const
{
    if (field.size() != size_) throw std::invalid_argument("SineTransform: length mismatch");
    auto* p = reinterpret_cast<double*>(field.data());
    fftw_execute_r2r(complex_plan_->get(), p, p);
    for (std::size_t i = 0; i < 2 * size_; ++i) p[i] *= scale_;
}

TimeDft::TimeDft(std::size_t rows, std::size_t nt) : rows_(rows), nt_(nt)
{
    if (rows == 0 || nt == 0) throw std::invalid_argument("TimeDft: empty block");
}

const Plan& TimeDft::plan_for(cplx* sample, std::size_t row_count, Direction dir) const
{
    const auto key = std::make_pair(row_count, dir == Direction::forward ? -1 : 1);
    std::lock_guard lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    const int n = static_cast<int>(nt_);
    auto* data = reinterpret_cast<fftw_complex*>(sample);
    fftw_plan p;
    {
        std::lock_guard planner(planner_mutex());
        p = fftw_plan_many_dft(1, &n, static_cast<int>(row_count), data, nullptr,
                               static_cast<int>(rows_), 1, data, nullptr, static_cast<int>(rows_), 1,
                               key.second, kPlanFlags);
    }
    if (!p) throw std::runtime_error("TimeDft: FFTW planning failed");
    return plans_.emplace(key, Plan(p)).first->second;
}

void TimeDft::execute(cplx* block, std::size_t row_begin, std::size_t row_count, Direction dir) const
{
    if (row_count == 0) return;
    if (row_begin + row_count > rows_) throw std::out_of_range("TimeDft: row range");
    cplx* start = block + row_begin;
    const Plan& plan = plan_for(start, row_count, dir);
    auto* data = reinterpret_cast<fftw_complex*>(start);
    fftw_execute_dft(plan.get(), data, data);
}

}  // namespace bhcp::fft
