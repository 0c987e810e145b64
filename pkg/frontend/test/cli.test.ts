import { execFileSync, execSync } from 'child_process';
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from 'fs';
import { tmpdir } from 'os';
import { join } from 'path';
import { fileURLToPath } from 'url';
import { beforeAll, describe, expect, it } from 'vitest';

const pkgDir = fileURLToPath(new URL('..', import.meta.url));
const cliJs = join(pkgDir, 'dist', 'cli.js');
const outDir = mkdtempSync(join(tmpdir(), 'plotgen-'));

function fixture(fig: number): string {
  return join(pkgDir, 'fixtures', `fig${fig}.csv`);
}

interface RunResult {
  status: number;
  stdout: string;
  stderr: string;
}

function runCli(...args: string[]): RunResult {
  try {
    const stdout = execFileSync(process.execPath, [cliJs, ...args], {
      encoding: 'utf8',
      stdio: ['ignore', 'pipe', 'pipe'],
    });
    return { status: 0, stdout, stderr: '' };
  } catch (err) {
    const e = err as { status: number; stdout: string; stderr: string };
    return { status: e.status, stdout: String(e.stdout), stderr: String(e.stderr) };
  }
}

beforeAll(() => {
  execSync('npm run build', { cwd: pkgDir, stdio: 'pipe', timeout: 120_000 });
}, 150_000);

describe('plotgen CLI', () => {
  it.each([2, 3, 4, 5, 6])('renders figure preset %d with exit code 0', (fig) => {
    const out = join(outDir, `fig${fig}.svg`);
    const res = runCli('--csv', fixture(fig), '--figure', String(fig), '--out', out);
    expect(res.status).toBe(0);
    expect(res.stdout).toContain(`wrote ${out}`);
    expect(existsSync(out)).toBe(true);
    expect(readFileSync(out, 'utf8')).toMatch(/^<svg /);
  });

  it('writes byte-identical output on repeated runs', () => {
    const a = join(outDir, 'rep-a.svg');
    const b = join(outDir, 'rep-b.svg');
    expect(runCli('--csv', fixture(5), '--figure', '5', '--out', a).status).toBe(0);
    expect(runCli('--csv', fixture(5), '--figure', '5', '--out', b).status).toBe(0);
    expect(readFileSync(a, 'utf8')).toBe(readFileSync(b, 'utf8'));
  });

  it('fails with a message on an unreadable CSV', () => {
    const res = runCli('--csv', join(outDir, 'absent.csv'), '--figure', '2', '--out', join(outDir, 'x.svg'));
    expect(res.status).toBe(1);
    expect(res.stderr).toContain('cannot read');
  });

  it('fails on a header-only CSV', () => {
    const headerOnly = join(outDir, 'empty.csv');
    writeFileSync(headerOnly, readFileSync(fixture(2), 'utf8').split('\n')[0] + '\n');
    const res = runCli('--csv', headerOnly, '--figure', '2', '--out', join(outDir, 'y.svg'));
    expect(res.status).toBe(1);
    expect(res.stderr).toContain('no rows for figure 2');
  });

  it('fails on an unknown figure id', () => {
    const res = runCli('--csv', fixture(2), '--figure', '8', '--out', join(outDir, 'z.svg'));
    expect(res.status).toBe(1);
    expect(res.stderr).toContain('unknown figure');
  });

  it('fails on missing required flags', () => {
    const res = runCli('--csv', fixture(2));
    expect(res.status).toBe(1);
    expect(res.stderr.length).toBeGreaterThan(0);
  });
});
