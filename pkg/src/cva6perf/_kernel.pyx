# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cycle loop; mirrors cva6perf.pipeline.Pipeline without logging.

Per-instruction inputs are flat int64 arrays. Control-flow outcomes are
resolved beforehand (predictors are updated in program order, so they do not
depend on timing). Returns 0, or 1 + the cycle at which progress stopped.
"""

from libc.stdlib cimport calloc, free

ctypedef long long i64

cdef enum:
    RAW = 0
    WAW = 1
    STRUCTURAL = 2
    CAPACITY = 3
    CONTROL = 4


def run(const i64[::1] rd, const i64[::1] rs1, const i64[::1] rs2,
        const i64[::1] group, const i64[::1] is_store, const i64[::1] is_control,
        const i64[::1] missed,
        const i64[::1] group_start, const i64[::1] group_len, const i64[::1] group_units,
        const i64[::1] latency, const i64[::1] wb_port, const i64[::1] stages,
        i64 issue_width, i64 commit_width, i64 depth,
        i64 penalty, i64 renaming, i64 speculative_sb,
        i64[::1] commit_out, i64[::1] issue_out, i64[::1] stalls):
    cdef Py_ssize_t n = rd.shape[0]
    cdef Py_ssize_t n_units = latency.shape[0]
    cdef i64 *sb_seq = <i64 *> calloc(depth, sizeof(i64))
    cdef i64 *sb_counter = <i64 *> calloc(depth, sizeof(i64))
    cdef i64 *sb_latency = <i64 *> calloc(depth, sizeof(i64))
    cdef char *sb_done = <char *> calloc(depth, sizeof(char))
    cdef i64 *last_issue = <i64 *> calloc(n_units, sizeof(i64))
    cdef char *busy = <char *> calloc(n_units, sizeof(char))
    if not (sb_seq and sb_counter and sb_latency and sb_done and last_issue and busy):
        free(sb_seq); free(sb_counter); free(sb_latency); free(sb_done)
        free(last_issue); free(busy)
        raise MemoryError()

    cdef i64 cycle = 0, next_seq = 0, retired = 0
    cdef i64 head = 0, tail = 0, occ = 0, occ_start
    cdef i64 last_miss = 0, idle = 0, guard, worst = 0
    cdef bint has_miss = False, progress
    cdef i64 port, k, s, j, u, v, i, src, reg, cause, chosen, g
    cdef i64 status = 0

    for u in range(n_units):
        last_issue[u] = -1
        if latency[u] + stages[u] - 1 > worst:
            worst = latency[u] + stages[u] - 1
    guard = depth + worst + penalty

    while retired < n:
        progress = False

        # commit
        for port in range(commit_width):
            if occ == 0:
                break
            s = head
            if not sb_done[s]:
                break
            if is_store[sb_seq[s]] and port > 0:
                break
            commit_out[sb_seq[s]] = cycle
            head = (head + 1) % depth
            occ -= 1
            retired += 1
            progress = True

        # execute
        for k in range(occ):
            s = (head + k) % depth
            if not sb_done[s]:
                sb_counter[s] += 1
                if sb_counter[s] >= sb_latency[s]:
                    sb_done[s] = 1
                    progress = True

        # issue
        for u in range(n_units):
            busy[u] = 0
        for u in range(n_units):
            if last_issue[u] >= 0 and 0 < cycle - last_issue[u] < stages[u]:
                for v in range(n_units):
                    if v != u and wb_port[v] == wb_port[u]:
                        busy[v] = 1
        occ_start = occ
        for k in range(issue_width):
            if next_seq >= n:
                break
            i = next_seq
            cause = -1
            chosen = -1
            if has_miss and cycle - last_miss < penalty:
                cause = CONTROL
            elif (k == 0 and occ_start >= depth) or (k == 1 and occ_start >= depth - 1) \
                    or (k > 1 and occ >= depth):
                cause = CAPACITY
            else:
                for j in range(2):
                    src = rs1[i] if j == 0 else rs2[i]
                    if src == 0 or cause >= 0:
                        continue
                    for v in range(occ - 1, -1, -1):
                        s = (head + v) % depth
                        if rd[sb_seq[s]] == src:
                            if not sb_done[s]:
                                cause = RAW
                            break
                reg = rd[i]
                if cause < 0 and reg != 0 and not renaming:
                    for v in range(occ):
                        if rd[sb_seq[(head + v) % depth]] == reg:
                            cause = WAW
                            break
                if cause < 0:
                    g = group[i]
                    for j in range(group_len[g]):
                        u = group_units[group_start[g] + j]
                        if not busy[u]:
                            chosen = u
                            break
                    if chosen < 0:
                        cause = STRUCTURAL
            if cause >= 0:
                stalls[cause] += 1
                break

            s = tail
            sb_seq[s] = i
            sb_counter[s] = 0
            sb_latency[s] = latency[chosen]
            sb_done[s] = 0
            tail = (tail + 1) % depth
            occ += 1
            for v in range(n_units):
                if wb_port[v] == wb_port[chosen]:
                    busy[v] = 1
            last_issue[chosen] = cycle
            issue_out[i] = cycle
            next_seq += 1
            progress = True
            if is_control[i]:
                if missed[i]:
                    has_miss = True
                    last_miss = cycle
                    break
                if not speculative_sb:
                    break

        if progress:
            idle = 0
        else:
            idle += 1
            if idle > guard:
                status = cycle + 1
                break
        cycle += 1

    free(sb_seq); free(sb_counter); free(sb_latency); free(sb_done)
    free(last_issue); free(busy)
    return status
