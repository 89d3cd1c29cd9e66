/** DOM rendering of the view model. Rebuilds the dynamic regions each
 * update; payloads are small and the cadence is 5 Hz. */

import { ViewModel } from './viewmodel.js';

const PED_SYMBOLS: Record<string, string> = {
    walk: '🚶',
    flashing: '✋ (flashing)',
    dont_walk: '✋',
};

export function renderViewModel(root: HTMLElement, vm: ViewModel): void {
    const banner = root.querySelector<HTMLElement>('[data-testid="banner"]');
    if (banner) {
        banner.textContent = vm.connected ? '' : 'disconnected from service';
        banner.dataset.connected = String(vm.connected);
        banner.style.display = vm.connected ? 'none' : 'block';
    }

    setText(root, 'status', vm.status);
    setText(root, 'client-mode', vm.clientMode);
    setText(root, 'sim-time', `${vm.timeS.toFixed(1)} s`);
    setText(root, 'scenario', vm.scenario);
    setText(root, 'walking', vm.walking ? 'walking' : 'stopped');
    setText(root, 'selected-street', vm.selectedStreet ?? '—');
    setText(
        root, 'distance',
        vm.measuredDistanceM === null ? '—' : `${vm.measuredDistanceM.toFixed(1)} m`,
    );
    setText(
        root, 'countdown',
        vm.countdownS === null ? '' : `${vm.countdownS}`,
    );

    const head = root.querySelector<HTMLElement>('[data-testid="signal-head"]');
    if (head) {
        head.replaceChildren();
        for (const lamp of vm.lamps) {
            const el = document.createElement('div');
            el.className = 'phase';
            el.dataset.testid = `phase-${lamp.phase}`;
            el.dataset.vehicular = lamp.vehicular;
            el.dataset.pedestrian = lamp.pedestrian;
            el.innerHTML =
                `<span class="label">phase ${lamp.phase}</span>` +
                `<span class="lamp lamp-${lamp.vehicular}"></span>` +
                `<span class="ped ped-${lamp.pedestrian}">${PED_SYMBOLS[lamp.pedestrian]}</span>`;
            head.appendChild(el);
        }
    }

    const ticker = root.querySelector<HTMLElement>('[data-testid="ticker"]');
    if (ticker) {
        ticker.replaceChildren();
        for (const text of vm.ticker) {
            const li = document.createElement('li');
            li.textContent = text;
            ticker.appendChild(li);
        }
        ticker.scrollTop = ticker.scrollHeight;
    }

    const tapButton = root.querySelector<HTMLButtonElement>('[data-testid="tap"]');
    if (tapButton) {
        tapButton.disabled = vm.status === 'FINISHED' || !vm.connected;
    }
}

function setText(root: HTMLElement, testid: string, value: string): void {
    const el = root.querySelector<HTMLElement>(`[data-testid="${testid}"]`);
    if (el) {
        el.textContent = value;
    }
}
