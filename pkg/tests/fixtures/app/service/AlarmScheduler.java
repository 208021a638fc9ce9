package com.noteapp.service;

public class AlarmScheduler {
    public void scheduleAlarm(Reminder reminder) {
        long scheduledTime = reminder.triggerAt();
        alarmManager.setExact(RTC_WAKEUP, scheduledTime, pendingIntent(reminder));
    }

    public void cancelAlarm(Reminder reminder) {
        alarmManager.cancel(pendingIntent(reminder));
    }

    public void onTimeChosen() {
        trackTrigger(R.id.reminder_time_picker);
        rescheduleAll();
    }
}
