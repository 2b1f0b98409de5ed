#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace es {

// Persistent fork-join worker pool. run(fn) executes fn(tid) on all workers
// and returns after the last one finishes. Workers park on a condition
// variable between tasks, so reusing a team across many small tasks is cheap
// compared to spawning threads.
class ThreadTeam {
public:
    explicit ThreadTeam(unsigned size) : size_(size == 0 ? 1 : size) {
        workers_.reserve(size_);
        for (unsigned tid = 0; tid < size_; ++tid)
            workers_.emplace_back([this, tid] { worker_loop(tid); });
    }

    ThreadTeam(const ThreadTeam&) = delete;
    ThreadTeam& operator=(const ThreadTeam&) = delete;

    ~ThreadTeam() {
        {
            std::scoped_lock lock(mutex_);
            stop_ = true;
            ++epoch_;
        }
        cv_.notify_all();
        for (auto& w : workers_)
            w.join();
    }

    unsigned size() const { return size_; }

    void run(const std::function<void(unsigned)>& fn) {
        std::unique_lock lock(mutex_);
        task_ = &fn;
        remaining_ = size_;
        ++epoch_;
        cv_.notify_all();
        done_cv_.wait(lock, [this] { return remaining_ == 0; });
        task_ = nullptr;
    }

private:
    void worker_loop(unsigned tid) {
        std::uint64_t seen = 0;
        for (;;) {
            const std::function<void(unsigned)>* task = nullptr;
            {
                std::unique_lock lock(mutex_);
                cv_.wait(lock, [&] { return epoch_ != seen; });
                seen = epoch_;
                if (stop_)
                    return;
                task = task_;
            }
            (*task)(tid);
            {
                std::scoped_lock lock(mutex_);
                if (--remaining_ == 0)
                    done_cv_.notify_one();
            }
        }
    }

    unsigned size_;
    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::condition_variable done_cv_;
    const std::function<void(unsigned)>* task_ = nullptr;
    unsigned remaining_ = 0;
    std::uint64_t epoch_ = 0;
    bool stop_ = false;
};

} // namespace es
