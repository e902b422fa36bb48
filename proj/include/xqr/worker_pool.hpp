#pragma once

// Fork-join pool with persistent threads.  run_tasks(count, fn) invokes
// fn(task, worker) for task = 0..count-1, striped statically across the
// workers, and returns only when every task has finished; that return is
// the inter-round barrier.  The first exception thrown by any task is
// rethrown on the calling thread.  Tasks must not call run_tasks on the
// same pool.

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "xqr/errors.hpp"

namespace xqr {

class worker_pool {
public:
    explicit worker_pool(std::size_t workers) {
        if (workers == 0) throw usage_error("worker count must be positive");
        threads_.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            threads_.emplace_back([this, w] { worker_loop(w); });
        }
    }

    virtual ~worker_pool() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    worker_pool(const worker_pool&) = delete;
    worker_pool& operator=(const worker_pool&) = delete;

    std::size_t size() const { return threads_.size(); }

    void run_tasks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
        if (count == 0) return;
        {
            std::lock_guard<std::mutex> lock(mu_);
            fn_ = &fn;
            count_ = count;
            done_ = 0;
            error_ = nullptr;
            ++epoch_;
        }
        cv_.notify_all();
        std::unique_lock<std::mutex> lock(mu_);
        main_cv_.wait(lock, [this] { return done_ == threads_.size(); });
        fn_ = nullptr;
        if (error_) std::rethrow_exception(error_);
    }

protected:
    // called right before each task body; exists so tests can inject
    // scheduling jitter
    virtual void on_task_start(std::size_t /*task*/, std::size_t /*worker*/) {}

private:
    void worker_loop(std::size_t w) {
        std::uint64_t seen = 0;
        for (;;) {
            const std::function<void(std::size_t, std::size_t)>* fn = nullptr;
            std::size_t count = 0;
            {
                std::unique_lock<std::mutex> lock(mu_);
                cv_.wait(lock, [&] { return stop_ || epoch_ != seen; });
                if (stop_) return;
                seen = epoch_;
                fn = fn_;
                count = count_;
            }
            for (std::size_t task = w; task < count; task += threads_.size()) {
                try {
                    on_task_start(task, w);
                    (*fn)(task, w);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu_);
                    if (!error_) error_ = std::current_exception();
                }
            }
            {
                std::lock_guard<std::mutex> lock(mu_);
                ++done_;
                if (done_ == threads_.size()) main_cv_.notify_one();
            }
        }
    }

    std::vector<std::thread> threads_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable main_cv_;
    const std::function<void(std::size_t, std::size_t)>* fn_ = nullptr;
    std::size_t count_ = 0;
    std::size_t done_ = 0;
    std::uint64_t epoch_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
};

}  // namespace xqr
