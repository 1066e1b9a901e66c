"""Pick (p, q) by information criterion on the training years.

A full 7x7 grid takes ~25 s on one core; this script uses a 4x4 grid.
Pass n_jobs=-1 to spread the fits over all cores.
"""
from boxjenkins import best_model, grid_search, load_bundled, log_transform, residual_summary, train_test_split

train, test = train_test_split(log_transform(load_bundled()), 0.7)
print(f"train {train.start_year}-{train.end_year}, test {test.start_year}-{test.end_year}")

for criterion in ("AIC", "BIC"):
    grid = grid_search(train, d=1, p_max=3, q_max=3, criterion=criterion, seed=42)
    print(f"\n{criterion}: five best of {len(grid)}")
    for e in grid[:5]:
        print(f"  {e.spec}  {e.criterion_value:8.3f}")
    best = best_model(grid)

fit = best.fit_handle
print(f"\nchosen by {criterion}: {fit.spec}, loglik {fit.loglik:.3f}, sigma {fit.sigma:.4f}")
for stat in fit.inference:
    print(f"  {stat.name:8s} {stat.coef:8.4f}  se {stat.se:.4f}  p {stat.p_value:.3f}")

diag = residual_summary(fit)
lb = diag.ljung_box
print(f"Ljung-Box Q = {lb.statistic:.2f} on {lb.dof} dof, p = {lb.p_value:.3f}")
